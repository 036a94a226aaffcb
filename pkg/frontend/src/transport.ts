/** Line-oriented transport abstraction; the browser variant is a WebSocket. */

export interface LineTransport {
  send(line: string): void;
  onLine(handler: (line: string) => void): void;
  onOpen(handler: () => void): void;
  onClose(handler: () => void): void;
  close(): void;
}

/** One protocol message per WebSocket frame; bodies match the TCP stream. */
export class WebSocketTransport implements LineTransport {
  private ws: WebSocket;
  private lineHandler: (line: string) => void = () => {};
  private openHandler: () => void = () => {};
  private closeHandler: () => void = () => {};
  private queue: string[] = [];

  constructor(url: string) {
    this.ws = new WebSocket(url);
    this.ws.addEventListener("open", () => {
      for (const line of this.queue.splice(0)) this.ws.send(line);
      this.openHandler();
    });
    this.ws.addEventListener("message", (ev: MessageEvent) => {
      this.lineHandler(String(ev.data));
    });
    this.ws.addEventListener("close", () => this.closeHandler());
    this.ws.addEventListener("error", () => this.closeHandler());
  }

  send(line: string): void {
    if (this.ws.readyState === WebSocket.OPEN) {
      this.ws.send(line);
    } else if (this.ws.readyState === WebSocket.CONNECTING) {
      this.queue.push(line);
    }
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
    this.ws.close();
  }
}
