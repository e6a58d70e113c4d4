import { EndpointTables, nodeInfo, nodeList, paramNames } from "./ros2.js";

export interface SnapshotNode extends EndpointTables {
  fqn: string;
  parameters: string[];
}

export interface GraphSnapshot {
  captured_at: string;
  nodes: SnapshotNode[];
}

/** Introspect the reachable ROS 2 graph into a runtime-snapshot document. */
export async function collectGraph(): Promise<GraphSnapshot> {
  const fqns = await nodeList();
  const nodes: SnapshotNode[] = [];
  for (const fqn of fqns) {
    const tables = await nodeInfo(fqn);
    const parameters = await paramNames(fqn);
    nodes.push({ fqn, ...tables, parameters });
  }
  return { captured_at: new Date().toISOString(), nodes };
}

export function serializeGraph(snapshot: GraphSnapshot): string {
  const doc = {
    captured_at: snapshot.captured_at,
    nodes: snapshot.nodes.map((n) => ({
      fqn: n.fqn,
      publishers: n.publishers,
      subscribers: n.subscribers,
      services: n.services,
      clients: n.clients,
      action_servers: n.action_servers,
      action_clients: n.action_clients,
      parameters: n.parameters,
    })),
  };
  return JSON.stringify(doc, null, 2) + "\n";
}
