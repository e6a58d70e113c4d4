import { renameSync, writeFileSync } from "node:fs";

/**
 * Write the whole file or nothing: content goes to a sibling temp file that
 * is renamed over the target only once fully written.
 */
export function writeFileAtomic(path: string, content: string): void {
  const tmp = `${path}.tmp-${process.pid}`;
  writeFileSync(tmp, content);
  renameSync(tmp, path);
}
