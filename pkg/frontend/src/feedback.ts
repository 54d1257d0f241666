/**
 * Unlock feedback: a short cue on success, a long one on failure, mirroring
 * short/long vibrotactile conventions. Browsers only expose coarse-grained
 * vibration (when at all), so the haptic part is best effort and the visual
 * state carries the same signal.
 */

export interface FeedbackSink {
  success(): void;
  failure(): void;
}

const SUCCESS_VIBRATION_MS = 60;
const FAILURE_VIBRATION_MS = 400;

function vibrate(ms: number): void {
  try {
    (navigator as any)?.vibrate?.(ms);
  } catch {
    // unsupported; visual cue still fires
  }
}

export function makeBrowserFeedback(
  element: { classList: { add(c: string): void; remove(c: string): void } },
  holdMs = 900,
  schedule: (fn: () => void, ms: number) => void = (fn, ms) => setTimeout(fn, ms),
): FeedbackSink {
  const flash = (cls: string) => {
    element.classList.add(cls);
    schedule(() => element.classList.remove(cls), holdMs);
  };
  return {
    success() {
      vibrate(SUCCESS_VIBRATION_MS);
      flash("unlock-success");
    },
    failure() {
      vibrate(FAILURE_VIBRATION_MS);
      flash("unlock-failure");
    },
  };
}
