/** Secondary acceptance: scripted VerticalDrag against the live service.
 *
 * Drag to mid-span and release: the engine must commit index 14's symbol,
 * the text area must show it, and the frozen episode graph must carry the
 * full sample series the client sent for that episode.
 */
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { SessionClient } from "../src/client.js";
import { SampleLoop } from "../src/loop.js";
import { VerticalDragProxy } from "../src/proxy.js";
import { buildUi, renderFrame } from "../src/render.js";
import { type RunningServer, TcpLineTransport, startServer, until } from "./helpers.js";

const q9 = (x: number) => Number(x.toPrecision(9));

describe("drag round-trip against the live service", () => {
  let server: RunningServer;

  beforeAll(async () => {
    server = await startServer();
  });

  afterAll(() => {
    server.stop();
  });

  it("mid-span drag commits index 14's symbol and freezes the full graph", async () => {
    const transport = new TcpLineTransport(server.port);
    const sentSamples: Array<[number, number]> = [];
    const rawSend = transport.send.bind(transport);
    transport.send = (line: string) => {
      const msg = JSON.parse(line);
      if (msg.type === "sample") sentSamples.push([msg.t, msg.raw]);
      rawSend(line);
    };

    const client = new SessionClient(transport);
    await until(() => client.state.phase === "live");
    expect(client.state.layout).toHaveLength(28);
    const expectedSymbol = client.state.layout[14]; // 'O'
    expect(expectedSymbol).toBe("O");

    const ui = buildUi(document, document.body, client.state.layout);
    client.onChange((state) => renderFrame(ui, state));

    // scripted drag: down, pull to mid-span, hold a few frames
    const proxy = new VerticalDragProxy(300);
    const clock = { value: 0 };
    const loop = new SampleLoop(client, proxy, { rateHz: 72, now: () => clock.value });
    const tick = () => {
      clock.value += 1 / 72;
      loop.tick();
    };

    proxy.pointerDown(100);
    proxy.pointerMove(250); // 150 px of a 300 px span -> raw 0.5
    for (let i = 0; i < 8; i++) tick();

    // highlight should arrive at index 14 while still pressed
    await until(() => client.state.highlightIndex === 14, tick);
    expect(ui.cells[14].classList.contains("selected")).toBe(true);

    // release: zero frames flow until the server confirms the commit
    proxy.pointerUp();
    await until(() => client.state.lastCommittedSymbol !== null, tick);

    expect(client.state.lastCommittedSymbol).toBe(expectedSymbol);

    // the text area shows the committed symbol
    await until(() => client.state.text.length > 0, tick);
    expect(client.state.text).toBe(expectedSymbol);
    expect(ui.textArea.textContent).toBe(expectedSymbol);

    // the frozen graph holds the full episode series: every pressed sample
    // plus the confirming zero frame, in order
    await until(() => client.state.frozenGraph !== null, tick);
    const frozen = client.state.frozenGraph!;
    const firstPressed = sentSamples.findIndex(([, raw]) => raw > 0);
    const confirmIdx = sentSamples.findIndex(([, raw], i) => i > firstPressed && raw === 0);
    const episode = sentSamples.slice(firstPressed, confirmIdx + 1);
    expect(frozen).toHaveLength(episode.length);
    for (let i = 0; i < episode.length; i++) {
      expect(frozen[i][0]).toBeCloseTo(q9(episode[i][0]), 9);
      expect(frozen[i][1]).toBeCloseTo(q9(episode[i][1]), 9);
    }
    expect(frozen[frozen.length - 1][1]).toBe(0);

    // rendered graph mirrors the frozen series
    expect(ui.graphLine.getAttribute("points")!.split(" ")).toHaveLength(frozen.length);
    expect(ui.graphLine.classList.contains("frozen")).toBe(true);

    client.end();
  });

  it("key-hold ramp commits the bin highlighted at release", async () => {
    const transport = new TcpLineTransport(server.port);
    const client = new SessionClient(transport);
    await until(() => client.state.phase === "live");

    const clock = { value: 0 };
    const { KeyHoldProxy } = await import("../src/proxy.js");
    const proxy = new KeyHoldProxy(1.5, () => clock.value);
    const loop = new SampleLoop(client, proxy, { rateHz: 72, now: () => clock.value });
    const tick = () => {
      clock.value += 1 / 72;
      loop.tick();
    };

    proxy.keyDown();
    const raws: number[] = [];
    for (let i = 0; i < 10; i++) {
      tick();
      raws.push((clock.value - 0) * 1.5); // proxy ramp at this tick
    }
    proxy.keyUp();
    await until(() => client.state.lastCommittedSymbol !== null, tick);

    // monotone-ramp property: the commit is the bin of the final buffered
    // value, the mean of the last three ramp samples under the identity remap
    const window = raws.slice(-3);
    const buffered = (window[0] + window[1] + window[2]) / 3;
    const expected = client.state.layout[Math.floor(buffered * 28)];
    expect(client.state.lastCommittedSymbol).toBe(expected);
    expect(client.state.text).toBe(expected);
    client.end();
  });

  it("a second connection types independently", async () => {
    const transport = new TcpLineTransport(server.port);
    const client = new SessionClient(transport);
    await until(() => client.state.phase === "live");

    const proxy = new VerticalDragProxy(300);
    const clock = { value: 0 };
    const loop = new SampleLoop(client, proxy, { rateHz: 72, now: () => clock.value });
    const tick = () => {
      clock.value += 1 / 72;
      loop.tick();
    };

    // shallow drag: raw 0.05 -> normalized 0.05 with the identity remap -> 'B'
    proxy.pointerDown(0);
    proxy.pointerMove(15);
    for (let i = 0; i < 8; i++) tick();
    proxy.pointerUp();
    await until(() => client.state.lastCommittedSymbol !== null, tick);
    expect(client.state.lastCommittedSymbol).toBe("B");
    expect(client.state.text).toBe("B");
    client.end();
  });
});
