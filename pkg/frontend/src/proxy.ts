/** Pressure proxies: stand-ins for a force sensor, each emitting raw in [0, 1]. */

export type ProxyMode = "force" | "drag" | "key";

export interface PressureProxy {
  readonly mode: ProxyMode;
  /** Raw pressure right now; exactly 0 when released. */
  current(): number;
}

function clamp01(x: number): number {
  return x < 0 ? 0 : x > 1 ? 1 : x;
}

/** Drag distance from touch-down maps linearly onto [0, 1] over spanPx. */
export class VerticalDragProxy implements PressureProxy {
  readonly mode = "drag" as const;
  private originY: number | null = null;
  private lastY = 0;

  constructor(readonly spanPx: number = 300) {}

  pointerDown(y: number): void {
    this.originY = y;
    this.lastY = y;
  }

  pointerMove(y: number): void {
    if (this.originY !== null) this.lastY = y;
  }

  pointerUp(): void {
    this.originY = null;
  }

  current(): number {
    if (this.originY === null) return 0;
    return clamp01((this.lastY - this.originY) / this.spanPx);
  }
}

/** Hold duration ramps raw pressure at ratePerSecond; release drops to 0. */
export class KeyHoldProxy implements PressureProxy {
  readonly mode = "key" as const;
  private downSince: number | null = null;

  constructor(
    readonly ratePerSecond: number = 1.5,
    private now: () => number = () => performance.now() / 1000,
  ) {}

  keyDown(): void {
    if (this.downSince === null) this.downSince = this.now();
  }

  keyUp(): void {
    this.downSince = null;
  }

  current(): number {
    if (this.downSince === null) return 0;
    return clamp01((this.now() - this.downSince) * this.ratePerSecond);
  }
}

/** Native pressure-capable pointers (PointerEvent.pressure). */
export class PointerForceProxy implements PressureProxy {
  readonly mode = "force" as const;
  private pressure = 0;
  private pressed = false;

  update(pressure: number, pressed: boolean): void {
    this.pressure = pressure;
    this.pressed = pressed;
  }

  current(): number {
    return this.pressed ? clamp01(this.pressure) : 0;
  }
}
