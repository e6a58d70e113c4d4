import { readdirSync, readFileSync, statSync } from "node:fs";
import { basename, join, relative, resolve, sep } from "node:path";

import { UsageError } from "./ros2.js";

export interface SourceRepository {
  name: string;
  packages: string[];
}

export interface SourceWorkspace {
  name: string;
  repositories: SourceRepository[];
}

export interface SourceSnapshot {
  workspaces: SourceWorkspace[];
}

const SKIP_DIRS = new Set(["build", "install", "log", "node_modules"]);

function manifestName(manifestPath: string): string | null {
  // package.xml is plain enough that the first <name> element is the package
  const text = readFileSync(manifestPath, "utf8");
  const m = /<name>\s*([^<\s][^<]*?)\s*<\/name>/.exec(text);
  return m ? m[1] : null;
}

function* findManifests(dir: string): Generator<string> {
  for (const entry of readdirSync(dir, { withFileTypes: true })) {
    if (entry.isDirectory()) {
      if (entry.name.startsWith(".") || SKIP_DIRS.has(entry.name)) continue;
      yield* findManifests(join(dir, entry.name));
    } else if (entry.name === "package.xml") {
      yield join(dir, entry.name);
    }
  }
}

function repositoryOf(root: string, packageDir: string): string {
  const rel = relative(root, packageDir);
  if (rel === "") return basename(root);
  const segments = rel.split(sep);
  // colcon layout keeps cloned repositories under <root>/src
  if (segments[0] === "src" && segments.length > 1) segments.shift();
  return segments[0];
}

/**
 * Discover packages (by manifest presence) under each workspace root and
 * group them per repository directory.
 */
export function collectSources(roots: string[]): SourceSnapshot {
  const workspaces: SourceWorkspace[] = [];
  const usedWorkspaceNames = new Set<string>();
  const seenPackages = new Set<string>();
  for (const raw of roots) {
    const root = resolve(raw);
    let stats;
    try {
      stats = statSync(root);
    } catch {
      throw new UsageError(`workspace root ${raw} is not readable`);
    }
    if (!stats.isDirectory()) {
      throw new UsageError(`workspace root ${raw} is not a directory`);
    }
    // two roots may share a basename; the later one keeps its full path so
    // workspace names stay unique in the emitted document
    let name = basename(root);
    if (usedWorkspaceNames.has(name)) name = root;
    usedWorkspaceNames.add(name);

    const repositories = new Map<string, Set<string>>();
    for (const manifest of findManifests(root)) {
      const packageDir = manifest.slice(0, -"/package.xml".length);
      const pkg = manifestName(manifest) ?? basename(packageDir);
      if (seenPackages.has(pkg)) {
        console.error(`warning: duplicate package ${pkg} at ${packageDir} skipped`);
        continue;
      }
      seenPackages.add(pkg);
      const repo = repositoryOf(root, packageDir);
      if (!repositories.has(repo)) repositories.set(repo, new Set());
      repositories.get(repo)!.add(pkg);
    }
    workspaces.push({
      name,
      repositories: [...repositories.keys()].sort().map((repo) => ({
        name: repo,
        packages: [...repositories.get(repo)!].sort(),
      })),
    });
  }
  workspaces.sort((a, b) => a.name.localeCompare(b.name));
  return { workspaces };
}

export function serializeSources(snapshot: SourceSnapshot): string {
  return JSON.stringify(snapshot, null, 2) + "\n";
}
