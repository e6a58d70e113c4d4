import { execFile } from "node:child_process";
import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { dirname, join, resolve } from "node:path";
import { fileURLToPath } from "node:url";

export const COLLECTOR_ROOT = resolve(dirname(fileURLToPath(import.meta.url)), "..");
export const FAKE_BIN = join(COLLECTOR_ROOT, "test", "bin");
export const CLI = join(COLLECTOR_ROOT, "dist", "cli.js");
export const DEMO_MODEL = join(COLLECTOR_ROOT, "test", "fixtures", "demo_model.json");
export const DEMO_WORLD = join(COLLECTOR_ROOT, "test", "fixtures", "demo_world.json");

export interface RunResult {
  code: number;
  stdout: string;
  stderr: string;
}

export function tmpDir(): string {
  return mkdtempSync(join(tmpdir(), "collect-"));
}

export function writeWorld(world: unknown): string {
  const path = join(tmpDir(), "world.json");
  writeFileSync(path, JSON.stringify(world));
  return path;
}

interface CliEnv {
  world?: string;
  ros2Available?: boolean;
}

export function runCli(args: string[], opts: CliEnv = {}): Promise<RunResult> {
  const env: NodeJS.ProcessEnv = { ...process.env };
  if (opts.ros2Available === false) {
    env.PATH = tmpDir();
  } else {
    env.PATH = `${FAKE_BIN}:${process.env.PATH ?? ""}`;
    env.FAKE_ROS2_WORLD = opts.world ?? DEMO_WORLD;
  }
  return run(process.execPath, [CLI, ...args], env);
}

export function runPrimary(args: string[]): Promise<RunResult> {
  return run("python3", ["-m", "meros_verify.cli", ...args], process.env);
}

function run(file: string, args: string[], env: NodeJS.ProcessEnv): Promise<RunResult> {
  return new Promise((resolvePromise) => {
    execFile(file, args, { env, timeout: 30_000 }, (err, stdout, stderr) => {
      let code = 0;
      if (err) {
        const raw = (err as NodeJS.ErrnoException).code;
        code = typeof raw === "number" ? raw : 1;
      }
      resolvePromise({ code, stdout, stderr });
    });
  });
}
