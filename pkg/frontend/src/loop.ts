/** Fixed-rate sample loop with strictly monotonic timestamps.
 *
 * Samples are sent while pressure is applied and, after release, zero
 * frames continue until the server confirms the commit.  More than three
 * missed ticks raise the starvation flag.
 */
import type { SessionClient } from "./client.js";
import type { PressureProxy } from "./proxy.js";

const MIN_STEP = 1e-6; // microsecond resolution floor

export interface LoopOptions {
  rateHz?: number;
  now?: () => number;
  hand?: "L" | "R";
}

export class SampleLoop {
  readonly rateHz: number;
  private readonly now: () => number;
  private readonly hand: "L" | "R";
  private lastT: number | null = null;
  private lastTick: number | null = null;
  private timer: ReturnType<typeof setInterval> | null = null;

  constructor(
    private client: SessionClient,
    private proxy: PressureProxy,
    opts: LoopOptions = {},
  ) {
    this.rateHz = opts.rateHz ?? 72;
    this.now = opts.now ?? (() => performance.now() / 1000);
    this.hand = opts.hand ?? "R";
  }

  start(): void {
    this.stop();
    this.timer = setInterval(() => this.tick(), 1000 / this.rateHz);
  }

  stop(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }

  /** One sampling tick; exposed so tests can drive the loop deterministically. */
  tick(): void {
    const wall = this.now();
    if (this.lastTick !== null) {
      const missed = (wall - this.lastTick) * this.rateHz - 1;
      this.client.setStarved(missed > 3);
    }
    this.lastTick = wall;

    const raw = this.proxy.current();
    if (raw <= 0 && !this.client.awaitingConfirm) return; // idle: nothing to say
    const t = this.lastT === null ? wall : Math.max(wall, this.lastT + MIN_STEP);
    this.lastT = t;
    this.client.sendSample(t, raw <= 0 ? 0 : raw, this.hand);
  }
}
