/**
 * Continuous training tone: sounds exactly while the surface is pressed.
 * The AudioContext is injectable so tests can observe start/stop without

 * real audio hardware.
 */

export interface OscillatorLike {
  frequency: { value: number };
  type: string;
  connect(node: unknown): void;
  start(): void;
  stop(): void;
  disconnect(): void;
}

export interface AudioContextLike {
  createOscillator(): OscillatorLike;
  createGain(): { gain: { value: number }; connect(node: unknown): void; disconnect(): void };
  destination: unknown;
  resume?: () => Promise<void>;
}

function defaultFactory(): AudioContextLike | null {
  try {
    const Ctx =
      (globalThis as any).AudioContext ?? (globalThis as any).webkitAudioContext;
    return Ctx ? new Ctx() : null;
  } catch {
    return null;
  }
}

export class TrainingTone {
  private ctx: AudioContextLike | null = null;
  private osc: OscillatorLike | null = null;
  private gain: ReturnType<AudioContextLike["createGain"]> | null = null;

  constructor(
    private frequencyHz = 440,
    private ctxFactory: () => AudioContextLike | null = defaultFactory,
  ) {}

  get active(): boolean {
    return this.osc !== null;
  }

  start(): void {
    if (this.osc) return;
    this.ctx ??= this.ctxFactory();
    if (!this.ctx) return;
    this.ctx.resume?.()?.catch(() => {});
    const osc = this.ctx.createOscillator();
    const gain = this.ctx.createGain();
    osc.type = "sine";
    osc.frequency.value = this.frequencyHz;
    gain.gain.value = 0.08;
    osc.connect(gain);
    gain.connect(this.ctx.destination);
    osc.start();
    this.osc = osc;
    this.gain = gain;
  }

  stop(): void {
    if (!this.osc) return;
    try {
      this.osc.stop();
      this.osc.disconnect();
      this.gain?.disconnect();
    } catch {
      // already stopped
    }
    this.osc = null;
    this.gain = null;
  }
}
