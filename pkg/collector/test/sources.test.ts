import { existsSync, mkdirSync, readFileSync, writeFileSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, test } from "vitest";

import { collectSources } from "../src/sources";
import { runCli, tmpDir } from "./helpers";

function addPackage(root: string, rel: string, name?: string): void {
  const dir = join(root, rel);
  mkdirSync(dir, { recursive: true });
  const tag = name ? `<name>${name}</name>` : "";
  writeFileSync(join(dir, "package.xml"), `<?xml version="1.0"?>\n<package format="3">${tag}</package>\n`);
}

describe("collect sources", () => {
  test("groups packages per repository under a colcon src layout", async () => {
    const root = join(tmpDir(), "demo_ws");
    addPackage(root, "src/repo_a/pkg_one", "alpha");
    addPackage(root, "src/repo_a/deep/pkg_two", "beta");
    addPackage(root, "src/repo_b/pkg_three", "gamma");
    const out = join(tmpDir(), "src.json");
    const result = await runCli(["sources", root, "--out", out]);
    expect(result.code).toBe(0);
    const snap = JSON.parse(readFileSync(out, "utf8"));
    expect(snap).toEqual({
      workspaces: [
        {
          name: "demo_ws",
          repositories: [
            { name: "repo_a", packages: ["alpha", "beta"] },
            { name: "repo_b", packages: ["gamma"] },
          ],
        },
      ],
    });
  });

  test("an empty root yields a workspace with no packages", async () => {
    const root = join(tmpDir(), "bare_ws");
    mkdirSync(root);
    const out = join(tmpDir(), "src.json");
    const result = await runCli(["sources", root, "--out", out]);
    expect(result.code).toBe(0);
    expect(JSON.parse(readFileSync(out, "utf8"))).toEqual({
      workspaces: [{ name: "bare_ws", repositories: [] }],
    });
  });

  test("an unreadable root exits 2 and writes nothing", async () => {
    const out = join(tmpDir(), "src.json");
    const result = await runCli(["sources", "/no/such/workspace", "--out", out]);
    expect(result.code).toBe(2);
    expect(existsSync(out)).toBe(false);
    expect(result.stderr).toContain("not readable");
  });

  test("a manifest without a name tag falls back to the directory name", () => {
    const root = join(tmpDir(), "ws");
    addPackage(root, "repo/nameless_pkg");
    const snap = collectSources([root]);
    expect(snap.workspaces[0].repositories).toEqual([{ name: "repo", packages: ["nameless_pkg"] }]);
  });

  test("packages directly under the root form their own repositories", () => {
    const root = join(tmpDir(), "flat_ws");
    addPackage(root, "standalone", "solo");
    const snap = collectSources([root]);
    expect(snap.workspaces[0].repositories).toEqual([{ name: "standalone", packages: ["solo"] }]);
  });

  test("roots sharing a basename keep unique workspace names", () => {
    const a = join(tmpDir(), "ws");
    const b = join(tmpDir(), "ws");
    mkdirSync(a);
    mkdirSync(b);
    const snap = collectSources([a, b]);
    const names = snap.workspaces.map((w) => w.name);
    expect(new Set(names).size).toBe(2);
    expect(names).toContain("ws");
  });

  test("a package name seen twice is kept once", () => {
    const a = join(tmpDir(), "first_ws");
    const b = join(tmpDir(), "second_ws");
    addPackage(a, "repo/dup", "duplicated");
    addPackage(b, "repo/dup", "duplicated");
    const snap = collectSources([a, b]);
    const all = snap.workspaces.flatMap((w) => w.repositories.flatMap((r) => r.packages));
    expect(all).toEqual(["duplicated"]);
  });

  test("build and hidden directories are not searched", () => {
    const root = join(tmpDir(), "ws");
    addPackage(root, "src/repo/real", "kept");
    addPackage(root, "build/repo/ghost", "built");
    addPackage(root, ".git/repo/ghost2", "hidden");
    const snap = collectSources([root]);
    const all = snap.workspaces.flatMap((w) => w.repositories.flatMap((r) => r.packages));
    expect(all).toEqual(["kept"]);
  });
});
