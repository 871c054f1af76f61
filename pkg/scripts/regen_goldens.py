"""Regenerate golden files: CLI --help texts and the OpenAPI document.

Run from the repository root after changing CLI flags or service routes:

    python scripts/regen_goldens.py
"""
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parents[1]


def regen_cli_help() -> None:
    from zcbm.cli import build_parser

    out_dir = ROOT / "tests" / "golden" / "cli"
    out_dir.mkdir(parents=True, exist_ok=True)
    parser = build_parser()
    (out_dir / "zcbm.txt").write_text(parser.format_help())
    subparsers = next(
        a for a in parser._actions  # noqa: SLF001
        if isinstance(a, type(parser._subparsers._group_actions[0]))  # noqa: SLF001
    )
    for name, sub in subparsers.choices.items():
        (out_dir / f"{name}.txt").write_text(sub.format_help())
    print(f"wrote CLI help goldens to {out_dir}")


def regen_openapi() -> None:
    from zcbm.bank import bank_from_arrays
    from zcbm.pipeline import ClassSet
    from zcbm.service.app import create_app, export_openapi

    rng = np.random.default_rng(0)
    ortho = np.eye(8)
    extra = rng.standard_normal((8, 8))
    extra /= np.linalg.norm(extra, axis=1, keepdims=True)
    rows = np.vstack([ortho, extra]).astype(np.float32)
    bank = bank_from_arrays([f"concept {i}" for i in range(16)], rows)
    classes = ClassSet.from_arrays(["zero", "one", "two"],
                                   ortho[:3].astype(np.float32))
    app = create_app(bank, classes)
    out = ROOT / "docs" / "openapi.json"
    out.parent.mkdir(exist_ok=True)
    out.write_text(export_openapi(app))
    print(f"wrote {out}")


if __name__ == "__main__":
    regen_cli_help()
    regen_openapi()
