/** Session protocol message bodies (identical over TCP lines and WebSocket frames). */

export type Hand = "L" | "R";

export const PROTOCOL_VERSION = 1;

export interface EngineConfigBody {
  remap_lo: number;
  remap_hi: number;
  buffer_size: number;
  nominal_rate: number;
  hold_delete_delay: number;
  hold_delete_rate: number;
  hold_threshold: number;
}

export interface HelloMessage {
  type: "hello";
  protocol_version: number;
  config?: Partial<EngineConfigBody>;
}
export interface SampleMessage {
  type: "sample";
  t: number;
  raw: number;
  hand: Hand;
}
export interface ResetMessage {
  type: "reset";
}
export interface EndSessionMessage {
  type: "end_session";
}
export type ClientMessage = HelloMessage | SampleMessage | ResetMessage | EndSessionMessage;

export interface WelcomeMessage {
  type: "welcome";
  protocol_version: number;
  config: EngineConfigBody;
  layout: string[];
}
export interface HighlightMessage {
  type: "highlight";
  index: number;
  buffered: number;
}
export interface CommittedMessage {
  type: "committed";
  symbol: string;
  selection_pressure: number;
  duration_s: number;
}
export interface DeletedMessage {
  type: "deleted";
  source: "commit" | "hold_repeat";
}
export interface TextMessage {
  type: "text";
  text: string;
}
export interface GraphMessage {
  type: "graph";
  samples: [number, number][];
}
export interface ErrorMessage {
  type: "error";
  code: string;
  detail: string;
}
export type ServerMessage =
  | WelcomeMessage
  | HighlightMessage
  | CommittedMessage
  | DeletedMessage
  | TextMessage
  | GraphMessage
  | ErrorMessage;

export function encodeClientMessage(msg: ClientMessage): string {
  return JSON.stringify(msg);
}

const SERVER_TYPES = new Set([
  "welcome",
  "highlight",
  "committed",
  "deleted",
  "text",
  "graph",
  "error",
]);

export function parseServerMessage(line: string): ServerMessage {
  const obj = JSON.parse(line) as { type?: string };
  if (!obj || typeof obj.type !== "string" || !SERVER_TYPES.has(obj.type)) {
    throw new Error(`unknown server message: ${line}`);
  }
  return obj as ServerMessage;
}
