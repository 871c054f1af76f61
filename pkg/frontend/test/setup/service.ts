/**
 * Vitest global setup: generate the synthetic fixture and run the real
 * inference service against it for the duration of the test run.
 */
import { spawn, spawnSync, type ChildProcess } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import type { TestProject } from "vitest/node";

let child: ChildProcess | null = null;
let fixtureDir = "";

async function waitForHealth(url: string, timeoutMs = 30_000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  let lastError: unknown = null;
  while (Date.now() < deadline) {
    try {
      const response = await fetch(`${url}/v1/healthz`);
      if (response.ok) return;
    } catch (err) {
      lastError = err;
    }
    await new Promise((resolve) => setTimeout(resolve, 200));
  }
  throw new Error(`service never became healthy: ${lastError}`);
}

export default async function setup(project: TestProject): Promise<() => void> {
  fixtureDir = mkdtempSync(join(tmpdir(), "zcbm-ui-"));
  const here = new URL(".", import.meta.url).pathname;
  const made = spawnSync("python3", [join(here, "make_fixture.py"), fixtureDir], {
    encoding: "utf-8",
  });
  if (made.status !== 0) {
    throw new Error(`fixture generation failed: ${made.stderr}`);
  }

  const port = 8400 + Math.floor(Math.random() * 400);
  const url = `http://127.0.0.1:${port}`;
  child = spawn(
    "python3",
    [
      "-m", "zcbm.cli", "serve",
      "--addr", `127.0.0.1:${port}`,
      "--bank", join(fixtureDir, "bank"),
      "--classes", join(fixtureDir, "classes.json"),
      "--class-embeddings", join(fixtureDir, "classes.zcbm"),
      "--lambda", "0.0001",
      "--cors-origin", "*",
    ],
    { stdio: ["ignore", "pipe", "pipe"] },
  );
  const stderr: string[] = [];
  child.stderr?.on("data", (chunk: Buffer) => stderr.push(chunk.toString()));
  child.on("exit", (code) => {
    if (code && code !== 0) {
      console.error(`service exited ${code}: ${stderr.join("")}`);
    }
  });

  await waitForHealth(url);
  const sample = JSON.parse(
    readFileSync(join(fixtureDir, "sample.json"), "utf-8"),
  ) as { embedding: number[]; k: number };
  project.provide("serviceUrl", url);
  project.provide("sampleEmbedding", sample.embedding);
  project.provide("sampleK", sample.k);

  return () => {
    child?.kill("SIGTERM");
    rmSync(fixtureDir, { recursive: true, force: true });
  };
}

declare module "vitest" {
  export interface ProvidedContext {
    serviceUrl: string;
    sampleEmbedding: number[];
    sampleK: number;
  }
}
