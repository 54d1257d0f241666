/**
 * Enroll and unlock flows over the service API.
 *
 * Unlock streams one event per request with at most one request in flight:
 * events are queued onto a promise chain so ordering is preserved even when
 * the network is slower than the fingers. Service error names surface
 * verbatim in the status line.
 */

import { ApiError, ServiceClient } from "./api.js";
import type { WireEvent } from "./capture.js";
import type { FeedbackSink } from "./feedback.js";

export type DemoPhase = "idle" | "enrolled" | "unlocking" | "unlocked" | "error";

export interface StatusSink {
  (message: string): void;
}

export class DemoController {
  phase: DemoPhase = "idle";
  templateId: string | null = null;
  tapCount = 0;
  lastError: string | null = null;

  private sessionId: string | null = null;
  private queue: Promise<void> = Promise.resolve();

  constructor(
    private client: ServiceClient,
    private feedback: FeedbackSink,
    private status: StatusSink = () => {},
  ) {}

  get unlocked(): boolean {
    return this.phase === "unlocked";
  }

  get canUnlock(): boolean {
    return this.templateId !== null;
  }

  /** Enroll the captured buffer as the single active template. */
  async saveTemplate(events: WireEvent[]): Promise<boolean> {
    if (events.length === 0) {
      this.status("nothing captured yet");
      return false;
    }
    try {
      const created = await this.client.enroll(events);
      this.templateId = created.id;
      this.tapCount = created.tapCount;
      this.phase = "enrolled";
      this.lastError = null;
      this.status(`template saved: ${created.tapCount} taps, ${Math.round(created.spanMs)} ms`);
      return true;
    } catch (err) {
      this.fail(err);
      return false;
    }
  }

  /** Open a streaming session; required before unlock events flow. */
  async startUnlock(): Promise<boolean> {
    if (!this.templateId) {
      this.status("enroll a template first");
      return false;
    }
    try {
      this.sessionId = await this.client.createSession(this.templateId);
      this.phase = "unlocking";
      this.lastError = null;
      this.status("listening...");
      return true;
    } catch (err) {
      this.fail(err);
      return false;
    }
  }

  /**
   * Queue one unlock event. Returns the settled queue so callers (and
   * tests) can await delivery; events posted while a request is in flight
   * wait their turn.
   */
  pushUnlockEvent(ev: WireEvent): Promise<void> {
    this.queue = this.queue.then(async () => {
      if (!this.sessionId || this.phase !== "unlocking") return;
      try {
        const res = await this.client.pushEvent(this.sessionId, ev);
        if (res.accepted) {
          this.phase = "unlocked";
          this.feedback.success();
          this.status("unlocked");
        }
      } catch (err) {
        this.fail(err);
      }
    });
    return this.queue;
  }

  /** Abandon the attempt: long failure cue, fresh session. */
  async giveUp(): Promise<void> {
    await this.queue;
    this.feedback.failure();
    if (this.sessionId) {
      try {
        await this.client.deleteSession(this.sessionId);
      } catch {
        // the session may have expired; a fresh one follows anyway
      }
      this.sessionId = null;
    }
    if (this.templateId) await this.startUnlock();
  }

  /** Settle the outstanding queue (test and teardown helper). */
  flush(): Promise<void> {
    return this.queue;
  }

  private fail(err: unknown): void {
    this.phase = "error";
    this.feedback.failure();
    if (err instanceof ApiError) {
      this.lastError = err.code;
      this.status(err.message); // error name verbatim
    } else {
      this.lastError = "ConnectionError";
      this.status(`connection error: ${String(err)}`);
    }
  }
}
