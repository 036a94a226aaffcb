/** Session client: handshake, server-state store, sample sending.
 *
 * The client never computes character bins itself; the highlight box and
 * committed symbols come exclusively from server messages.
 */
import {
  type EngineConfigBody,
  type Hand,
  type ServerMessage,
  PROTOCOL_VERSION,
  encodeClientMessage,
  parseServerMessage,
} from "./protocol.js";
import type { LineTransport } from "./transport.js";

export type Phase = "connecting" | "live" | "closed";

export interface SessionState {
  phase: Phase;
  layout: string[];
  config: EngineConfigBody | null;
  highlightIndex: number | null;
  /** latest server-reported buffered pressure; 0 once an episode closes */
  buffered: number;
  text: string;
  /** raw samples of the episode in progress, for the live graph */
  liveEpisode: [number, number][];
  /** server-sent episode series; the graph freezes on this at commit */
  frozenGraph: [number, number][] | null;
  lastCommittedSymbol: string | null;
  lastDeletedSource: string | null;
  lastError: { code: string; detail: string } | null;
  starved: boolean;
}

function initialState(): SessionState {
  return {
    phase: "connecting",
    layout: [],
    config: null,
    highlightIndex: null,
    buffered: 0,
    text: "",
    liveEpisode: [],
    frozenGraph: null,
    lastCommittedSymbol: null,
    lastDeletedSource: null,
    lastError: null,
    starved: false,
  };
}

/** Pointer/key proxies have an exact zero and no resting-thumb noise, so the
 *  session defaults to an identity remap window instead of the sensor's. */
export const PROXY_REMAP: Partial<EngineConfigBody> = { remap_lo: 0.0, remap_hi: 1.0 };

export class SessionClient {
  readonly state: SessionState = initialState();
  private listeners: Array<(state: SessionState) => void> = [];
  private episodeOpen = false;

  constructor(
    private transport: LineTransport,
    configOverrides: Partial<EngineConfigBody> = PROXY_REMAP,
  ) {
    transport.onLine((line) => this.onServerLine(line));
    transport.onClose(() => {
      this.state.phase = "closed";
      this.emit();
    });
    transport.send(
      encodeClientMessage({
        type: "hello",
        protocol_version: PROTOCOL_VERSION,
        config: configOverrides,
      }),
    );
  }

  onChange(listener: (state: SessionState) => void): void {
    this.listeners.push(listener);
  }

  /** True while a press is unconfirmed: keep emitting zero frames. */
  get awaitingConfirm(): boolean {
    return this.episodeOpen;
  }

  sendSample(t: number, raw: number, hand: Hand = "R"): void {
    if (this.state.phase !== "live") return;
    if (raw > 0 && !this.episodeOpen) {
      this.episodeOpen = true;
      this.state.frozenGraph = null;
      this.state.liveEpisode = [];
    }
    if (this.episodeOpen) this.state.liveEpisode.push([t, raw]);
    this.transport.send(encodeClientMessage({ type: "sample", t, raw, hand }));
    this.emit();
  }

  reset(): void {
    this.transport.send(encodeClientMessage({ type: "reset" }));
    this.episodeOpen = false;
    this.state.highlightIndex = null;
    this.state.buffered = 0;
    this.state.liveEpisode = [];
    this.state.frozenGraph = null;
    this.state.text = "";
    this.emit();
  }

  end(): void {
    this.transport.send(encodeClientMessage({ type: "end_session" }));
    this.transport.close();
  }

  setStarved(flag: boolean): void {
    if (this.state.starved !== flag) {
      this.state.starved = flag;
      this.emit();
    }
  }

  private onServerLine(line: string): void {
    let msg: ServerMessage;
    try {
      msg = parseServerMessage(line);
    } catch {
      return; // tolerate unknown message types from newer servers
    }
    this.apply(msg);
    this.emit();
  }

  private apply(msg: ServerMessage): void {
    const st = this.state;
    switch (msg.type) {
      case "welcome":
        st.phase = "live";
        st.layout = msg.layout;
        st.config = msg.config;
        break;
      case "highlight":
        st.highlightIndex = msg.index;
        st.buffered = msg.buffered;
        break;
      case "committed":
        st.lastCommittedSymbol = msg.symbol;
        st.highlightIndex = null;
        st.buffered = 0;
        this.episodeOpen = false;
        break;
      case "deleted":
        st.lastDeletedSource = msg.source;
        if (msg.source === "commit") {
          st.highlightIndex = null;
          st.buffered = 0;
          this.episodeOpen = false;
        }
        break;
      case "text":
        st.text = msg.text;
        break;
      case "graph":
        // the episode is concluded: the graph halts on the server's series
        st.frozenGraph = msg.samples;
        st.liveEpisode = [];
        break;
      case "error":
        st.lastError = { code: msg.code, detail: msg.detail };
        break;
    }
  }

  private emit(): void {
    for (const listener of this.listeners) listener(this.state);
  }
}
