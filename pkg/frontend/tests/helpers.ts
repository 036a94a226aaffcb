/** Test-side transports and a launcher for the real session service. */
import { type ChildProcess, spawn } from "node:child_process";
import net from "node:net";

import type { LineTransport } from "../src/transport.js";

/** In-memory transport for unit tests. */
export class FakeTransport implements LineTransport {
  sent: string[] = [];
  private lineHandler: (line: string) => void = () => {};
  private openHandler: () => void = () => {};
  private closeHandler: () => void = () => {};

  send(line: string): void {
    this.sent.push(line);
  }
  onLine(handler: (line: string) => void): void {
    this.lineHandler = handler;
  }
  onOpen(handler: () => void): void {
    this.openHandler = handler;
  }
  onClose(handler: () => void): void {
    this.closeHandler = handler;
  }
  close(): void {
    this.closeHandler();
  }

  /** Push a server message into the client. */
  serverSays(obj: unknown): void {
    this.lineHandler(JSON.stringify(obj));
  }
  open(): void {
    this.openHandler();
  }
  drop(): void {
    this.closeHandler();
  }
}

/** Newline-framed JSON over a plain TCP stream (the service's other transport,
 *  carrying message bodies identical to the WebSocket variant). */
export class TcpLineTransport implements LineTransport {
  private sock: net.Socket;
  private buffer = "";
  private lineHandler: (line: string) => void = () => {};
  private openHandler: () => void = () => {};
  private closeHandler: () => void = () => {};
  private pending: string[] | null = [];

  constructor(port: number, host = "127.0.0.1") {
    this.sock = net.createConnection(port, host);
    this.sock.setEncoding("utf-8");
    this.sock.on("connect", () => {
      const queued = this.pending ?? [];
      this.pending = null;
      for (const line of queued) this.sock.write(line + "\n");
      this.openHandler();
    });
    this.sock.on("data", (chunk: string) => {
      this.buffer += chunk;
      let nl: number;
      while ((nl = this.buffer.indexOf("\n")) >= 0) {
        const line = this.buffer.slice(0, nl);
        this.buffer = this.buffer.slice(nl + 1);
        if (line.trim()) this.lineHandler(line);
      }
    });
    this.sock.on("close", () => this.closeHandler());
    this.sock.on("error", () => this.closeHandler());
  }

  send(line: string): void {
    if (this.pending !== null) this.pending.push(line);
    else this.sock.write(line + "\n");
  }
  onLine(handler: (line: string) => void): void {
    this.lineHandler = handler;
  }
  onOpen(handler: () => void): void {
    this.openHandler = handler;
  }
  onClose(handler: () => void): void {
    this.closeHandler = handler;
  }
  close(): void {
    this.sock.end();
    this.sock.destroy();
  }
}

export interface RunningServer {
  port: number;
  proc: ChildProcess;
  stop(): void;
}

function portIsOpen(port: number): Promise<boolean> {
  return new Promise((resolve) => {
    const sock = net.createConnection({ port, host: "127.0.0.1", timeout: 300 });
    sock.on("connect", () => {
      sock.destroy();
      resolve(true);
    });
    sock.on("error", () => resolve(false));
    sock.on("timeout", () => {
      sock.destroy();
      resolve(false);
    });
  });
}

export async function startServer(): Promise<RunningServer> {
  const port = 21000 + Math.floor(Math.random() * 20000);
  const proc = spawn(
    "python3",
    ["-m", "presstype.cli", "serve", "--bind", `127.0.0.1:${port}`],
    { stdio: ["ignore", "ignore", "pipe"] },
  );
  let stderr = "";
  proc.stderr?.on("data", (chunk) => (stderr += String(chunk)));
  for (let attempt = 0; attempt < 100; attempt++) {
    if (proc.exitCode !== null) {
      throw new Error(`service exited early (${proc.exitCode}): ${stderr}`);
    }
    if (await portIsOpen(port)) {
      return { port, proc, stop: () => proc.kill("SIGTERM") };
    }
    await sleep(100);
  }
  proc.kill("SIGTERM");
  throw new Error(`service did not come up on :${port}: ${stderr}`);
}

export function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

/** Poll until cond() holds, running step() between polls. */
export async function until(
  cond: () => boolean,
  step: () => void = () => {},
  timeoutMs = 10000,
): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (!cond()) {
    if (Date.now() > deadline) throw new Error("condition not reached in time");
    step();
    await sleep(5);
  }
}
