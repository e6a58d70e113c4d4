#!/usr/bin/env node

import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { collectGraph, serializeGraph } from "./graph.js";
import { collectSources, serializeSources } from "./sources.js";
import { loadConfig, recordTrace } from "./trace.js";
import { Ros2Error, UsageError } from "./ros2.js";
import { writeFileAtomic } from "./io.js";

async function main(): Promise<void> {
  await yargs(hideBin(process.argv))
    .scriptName("collect")
    .command(
      "graph",
      "snapshot the live computation graph",
      (y) => y.option("out", { type: "string", demandOption: true, describe: "snapshot file to write" }),
      async (argv) => {
        const snapshot = await collectGraph();
        writeFileAtomic(argv.out, serializeGraph(snapshot));
        console.log(`captured ${snapshot.nodes.length} nodes -> ${argv.out}`);
      },
    )
    .command(
      "sources <roots...>",
      "snapshot workspace source trees",
      (y) =>
        y
          .positional("roots", { type: "string", array: true, demandOption: true, describe: "workspace root directories" })
          .option("out", { type: "string", demandOption: true, describe: "snapshot file to write" }),
      async (argv) => {
        const snapshot = collectSources(argv.roots as string[]);
        writeFileAtomic(argv.out, serializeSources(snapshot));
        const packages = snapshot.workspaces.reduce(
          (n, ws) => n + ws.repositories.reduce((m, r) => m + r.packages.length, 0),
          0,
        );
        console.log(`captured ${packages} packages in ${snapshot.workspaces.length} workspaces -> ${argv.out}`);
      },
    )
    .command(
      "trace",
      "record labeled events from live channels",
      (y) =>
        y
          .option("config", { type: "string", demandOption: true, describe: "JSON list of {channel, label} rules" })
          .option("duration", { type: "number", demandOption: true, describe: "capture duration in seconds" })
          .option("out", { type: "string", demandOption: true, describe: "trace file to write (JSON Lines)" }),
      async (argv) => {
        if (!Number.isFinite(argv.duration) || argv.duration <= 0) {
          throw new UsageError("duration must be a positive number of seconds");
        }
        const rules = loadConfig(argv.config);
        const events = await recordTrace(rules, argv.duration * 1000, argv.out);
        console.log(`recorded ${events} events -> ${argv.out}`);
      },
    )
    .demandCommand(1)
    .strict()
    .fail((msg, err) => {
      throw err ?? new UsageError(msg);
    })
    .parseAsync();
}

main().catch((err: unknown) => {
  console.error(`error: ${err instanceof Error ? err.message : String(err)}`);
  process.exit(err instanceof UsageError ? 2 : 1);
});
