"""Write the synthetic bank/classes fixture the UI tests run against.

Usage: python3 make_fixture.py OUT_DIR
"""
import json
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[3] / "src"))

from zcbm.bank import bank_from_arrays, save_bank  # noqa: E402
from zcbm.vecstore import EmbeddingMatrix, save_matrix  # noqa: E402


def main(out_dir: str) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(7)
    ortho = np.eye(8)
    extra = rng.standard_normal((8, 8))
    extra /= np.linalg.norm(extra, axis=1, keepdims=True)
    rows = np.vstack([ortho, extra]).astype(np.float32)
    bank = bank_from_arrays([f"concept {i}" for i in range(16)], rows,
                            name="ui-fixture")
    save_bank(bank, out / "bank")

    classes = [{"label_id": i, "name": f"class {i}"} for i in range(3)]
    (out / "classes.json").write_text(json.dumps(classes))
    save_matrix(EmbeddingMatrix(ortho[:3].astype(np.float32), normalized=True),
                out / "classes.zcbm")

    sample = (0.6 * ortho[0] + 0.8 * ortho[1]).tolist()
    (out / "sample.json").write_text(json.dumps({"embedding": sample, "k": 8}))
    print(out)


if __name__ == "__main__":
    main(sys.argv[1])
