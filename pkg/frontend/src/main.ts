/** Entry point: query params pick the proxy mode and server address.
 *
 *   ?server=ws://127.0.0.1:7341&mode=drag|key|force&span=300&keyrate=1.5
 */
import { SessionClient } from "./client.js";
import { SampleLoop } from "./loop.js";
import {
  KeyHoldProxy,
  PointerForceProxy,
  VerticalDragProxy,
  type PressureProxy,
  type ProxyMode,
} from "./proxy.js";
import { buildUi, renderFrame } from "./render.js";
import { WebSocketTransport } from "./transport.js";

function pickMode(value: string | null): ProxyMode {
  if (value === "key" || value === "force" || value === "drag") return value;
  return "drag";
}

export function boot(doc: Document, win: Window & typeof globalThis): void {
  const params = new URLSearchParams(win.location.search);
  const server = params.get("server") ?? "ws://127.0.0.1:7341";
  const mode = pickMode(params.get("mode"));

  const transport = new WebSocketTransport(server);
  const client = new SessionClient(transport);

  let proxy: PressureProxy;
  if (mode === "key") {
    proxy = new KeyHoldProxy(Number(params.get("keyrate") ?? 1.5));
    win.addEventListener("keydown", (ev) => {
      if (ev.code === "Space" && !ev.repeat) (proxy as KeyHoldProxy).keyDown();
    });
    win.addEventListener("keyup", (ev) => {
      if (ev.code === "Space") (proxy as KeyHoldProxy).keyUp();
    });
  } else if (mode === "force") {
    proxy = new PointerForceProxy();
    win.addEventListener("pointerdown", (ev) =>
      (proxy as PointerForceProxy).update(ev.pressure, true),
    );
    win.addEventListener("pointermove", (ev) => {
      if (ev.buttons) (proxy as PointerForceProxy).update(ev.pressure, true);
    });
    win.addEventListener("pointerup", () => (proxy as PointerForceProxy).update(0, false));
  } else {
    proxy = new VerticalDragProxy(Number(params.get("span") ?? 300));
    win.addEventListener("pointerdown", (ev) => (proxy as VerticalDragProxy).pointerDown(ev.clientY));
    win.addEventListener("pointermove", (ev) => (proxy as VerticalDragProxy).pointerMove(ev.clientY));
    win.addEventListener("pointerup", () => (proxy as VerticalDragProxy).pointerUp());
    win.addEventListener("pointercancel", () => (proxy as VerticalDragProxy).pointerUp());
  }

  const mount = doc.getElementById("app") ?? doc.body;
  let ui = buildUi(doc, mount, []);
  client.onChange((state) => {
    if (state.layout.length !== ui.cells.length) {
      ui = buildUi(doc, mount, state.layout);
    }
    renderFrame(ui, state);
  });

  let loop: SampleLoop | null = null;
  client.onChange((state) => {
    if (state.phase === "live" && loop === null) {
      // tick rate follows the effective engine config
      loop = new SampleLoop(client, proxy, { rateHz: state.config?.nominal_rate ?? 72 });
      loop.start();
    }
    if (state.phase === "closed") loop?.stop();
  });
}

declare const window: (Window & typeof globalThis) | undefined;
if (typeof window !== "undefined" && typeof document !== "undefined") {
  boot(document, window);
}
