/**
 * Press/release capture for a whole-viewport single button.
 *
 * Timestamps come from the input events (`ev.timeStamp`), never from render
 * time, and are zeroed at the first press of a capture so the service sees a
 * per-attempt clock domain. Out-of-order hardware timestamps are clamped
 * forward and counted so the debug overlay can surface them.
 */

export type WireEvent = { t: number; k: "d" | "u" };
export type CaptureMode = "training" | "enroll" | "unlock";

export interface CaptureCallbacks {
  /** Fires on every accepted press edge (all modes, training included). */
  onPress?: (t: number) => void;
  /** Fires on every accepted release edge. */
  onRelease?: (t: number) => void;
  /** Fires with a recorded event in enroll/unlock modes only. */
  onEvent?: (ev: WireEvent) => void;
  onClamp?: (rawT: number, clampedT: number) => void;
}

const CLAMP_STEP_MS = 0.1;

export class CaptureBuffer {
  readonly events: WireEvent[] = [];
  clampCount = 0;

  private pressed = false;
  private t0: number | null = null;
  private lastT = -Infinity;

  constructor(
    public mode: CaptureMode = "enroll",
    private callbacks: CaptureCallbacks = {},
  ) {}

  get isPressed(): boolean {
    return this.pressed;
  }

  /** Drop buffered events and restart the capture clock. */
  clear(): void {
    this.events.length = 0;
    this.pressed = false;
    this.t0 = null;
    this.lastT = -Infinity;
    this.clampCount = 0;
  }

  /** A press edge at an absolute input timestamp; false if ignored. */
  down(timeStamp: number): boolean {
    if (this.pressed) return false; // auto-repeat or duplicate down
    if (this.t0 === null) this.t0 = timeStamp;
    const t = this.clamp(timeStamp - this.t0);
    this.pressed = true;
    this.record({ t, k: "d" });
    this.callbacks.onPress?.(t);
    return true;
  }

  /** A release edge; false if the surface was not pressed. */
  up(timeStamp: number): boolean {
    if (!this.pressed || this.t0 === null) return false;
    const t = this.clamp(timeStamp - this.t0);
    this.pressed = false;
    this.record({ t, k: "u" });
    this.callbacks.onRelease?.(t);
    return true;
  }

  private clamp(t: number): number {
    if (t <= this.lastT) {
      const clamped = this.lastT + CLAMP_STEP_MS;
      this.clampCount += 1;
      this.callbacks.onClamp?.(t, clamped);
      t = clamped;
    }
    this.lastT = t;
    return t;
  }

  private record(ev: WireEvent): void {
    if (this.mode === "training") return; // nothing is recorded while training
    this.events.push(ev);
    this.callbacks.onEvent?.(ev);
  }
}

/** Minimal event-target surface so tests can drive capture synthetically. */
export interface ListenerTarget {
  addEventListener(type: string, listener: (ev: any) => void): void;
}

export interface AttachOptions {
  /** Key that mirrors the touch surface for desktop testing. */
  keyCode?: string;
}

/**
 * Wire pointer and key listeners into a CaptureBuffer. Key auto-repeat is
 * suppressed twice over: `ev.repeat` is ignored and the buffer itself drops
 * a second down while pressed.
 */
export function attachCapture(
  target: ListenerTarget,
  buffer: CaptureBuffer,
  options: AttachOptions = {},
): void {
  const keyCode = options.keyCode ?? "Space";
  target.addEventListener("pointerdown", (ev) => {
    buffer.down(ev.timeStamp);
  });
  target.addEventListener("pointerup", (ev) => {
    buffer.up(ev.timeStamp);
  });
  target.addEventListener("pointercancel", (ev) => {
    buffer.up(ev.timeStamp);
  });
  target.addEventListener("keydown", (ev) => {
    if (ev.code !== keyCode || ev.repeat) return;
    ev.preventDefault?.();
    buffer.down(ev.timeStamp);
  });
  target.addEventListener("keyup", (ev) => {
    if (ev.code !== keyCode) return;
    ev.preventDefault?.();
    buffer.up(ev.timeStamp);
  });
}
