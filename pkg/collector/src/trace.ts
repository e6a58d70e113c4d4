import { spawn } from "node:child_process";
import { createWriteStream, readFileSync } from "node:fs";
import { createInterface } from "node:readline";
import { once } from "node:events";
import { z } from "zod";

import { UsageError, topicList, topicPublishers } from "./ros2.js";

const ruleSchema = z
  .object({
    channel: z.string().min(1),
    label: z.string(),
  })
  .strict();

const configSchema = z.array(ruleSchema);

export type LabelRule = z.infer<typeof ruleSchema>;

export function loadConfig(path: string): LabelRule[] {
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch {
    throw new UsageError(`config file ${path} is not readable`);
  }
  let doc: unknown;
  try {
    doc = JSON.parse(text);
  } catch (err) {
    throw new UsageError(`config file ${path} is not valid JSON: ${(err as Error).message}`);
  }
  const parsed = configSchema.safeParse(doc);
  if (!parsed.success) {
    throw new UsageError(`config file ${path} must be a JSON list of {"channel", "label"} rules`);
  }
  return parsed.data;
}

/** Literal channel name, or a trailing-* pattern matching by prefix. */
export function ruleMatches(pattern: string, channel: string): boolean {
  if (pattern.endsWith("*")) return channel.startsWith(pattern.slice(0, -1));
  return channel === pattern;
}

export interface TraceEvent {
  seq: number;
  channel_fqn: string;
  actor: string;
  label: string;
}

/**
 * The string payload of one echoed message, if it has one. `ros2 topic echo`
 * prints scalar payloads as a top-level `data:` line; nested payloads put
 * nothing after the colon, so they fall through to the rule's label.
 */
export function stringPayload(messageLines: string[]): string | undefined {
  for (const line of messageLines) {
    const m = /^data:\s*(.+)$/.exec(line);
    if (!m) continue;
    let value = m[1].trim();
    if (
      (value.startsWith("'") && value.endsWith("'") && value.length >= 2) ||
      (value.startsWith('"') && value.endsWith('"') && value.length >= 2)
    ) {
      value = value.slice(1, -1);
    }
    return value;
  }
  return undefined;
}

const POLL_MS = 200;

/**
 * Subscribe to every live channel matched by a rule and append one event
 * line per received message until the duration elapses. The channel list is
 * re-polled during the window, so channels that appear mid-capture (a
 * scripted run started after the recorder) still get a subscription. Events
 * get seq numbers in arrival order, gap-free from 1; the label is the
 * message's string payload when present, else the rule's template. Returns
 * the number of recorded events.
 */
export async function recordTrace(rules: LabelRule[], durationMs: number, outPath: string): Promise<number> {
  if (!(durationMs > 0)) throw new UsageError("duration must be positive");

  // fail before the file exists when the middleware is unreachable
  let live = await topicList();
  const stream = createWriteStream(outPath);
  const subscribed = new Set<string>();
  const children: ReturnType<typeof spawn>[] = [];
  let seq = 0;

  const attach = async (channel: string, label: string): Promise<void> => {
    subscribed.add(channel);
    // a single publisher lets events carry their originating node
    const publishers = await topicPublishers(channel);
    const actor = publishers.length === 1 ? publishers[0] : "";
    const child = spawn("ros2", ["topic", "echo", channel], { stdio: ["ignore", "pipe", "ignore"] });
    children.push(child);
    const reader = createInterface({ input: child.stdout! });
    let pending: string[] = [];
    reader.on("line", (line) => {
      if (/^---\s*$/.test(line)) {
        const event: TraceEvent = {
          seq: ++seq,
          channel_fqn: channel,
          actor,
          label: stringPayload(pending) ?? label,
        };
        stream.write(JSON.stringify(event) + "\n");
        pending = [];
      } else {
        pending.push(line);
      }
    });
  };

  const attachMatches = async (channels: string[]): Promise<void> => {
    for (const channel of channels) {
      if (subscribed.has(channel)) continue;
      const rule = rules.find((r) => ruleMatches(r.channel, channel));
      if (rule) await attach(channel, rule.label);
    }
  };

  await attachMatches(live);
  const deadline = Date.now() + durationMs;
  while (Date.now() < deadline) {
    await new Promise((res) => setTimeout(res, Math.min(POLL_MS, deadline - Date.now())));
    if (Date.now() >= deadline) break;
    try {
      live = await topicList();
    } catch {
      continue;
    }
    await attachMatches(live);
  }

  for (const child of children) {
    if (child.exitCode === null) child.kill("SIGKILL");
  }
  stream.end();
  await once(stream, "close");
  if (subscribed.size === 0) {
    console.error("warning: no live channel matched any rule, trace is empty");
  }
  return seq;
}
