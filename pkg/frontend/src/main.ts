/**
 * Page wiring. The whole viewport is the button; screen state stays
 * constant while tapping so watching the screen reveals nothing about the
 * rhythm being entered.
 */

import { ServiceClient } from "./api.js";
import { attachCapture, CaptureBuffer, CaptureMode } from "./capture.js";
import { makeBrowserFeedback } from "./feedback.js";
import { DemoController } from "./flows.js";
import { TrainingTone } from "./tone.js";

function $(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing #${id}`);
  return el;
}

const statusEl = $("status");
const overlayEl = $("debug-overlay");
const surface = $("surface");
const baseUrlInput = $("base-url") as HTMLInputElement;

const client = new ServiceClient(baseUrlInput.value);
baseUrlInput.addEventListener("change", () => {
  client.baseUrl = baseUrlInput.value.replace(/\/$/, "");
});

const feedback = makeBrowserFeedback(surface);
const controller = new DemoController(client, feedback, (msg) => {
  statusEl.textContent = msg;
});
const tone = new TrainingTone();

let mode: CaptureMode = "training";
const buffer = new CaptureBuffer(mode, {
  onPress: () => {
    if (mode === "training") tone.start();
  },
  onRelease: () => {
    tone.stop();
  },
  onEvent: (ev) => {
    if (mode === "unlock") void controller.pushUnlockEvent(ev);
  },
  onClamp: () => {
    overlayEl.textContent = `clamped timestamps: ${buffer.clampCount}`;
  },
});

attachCapture(surface, buffer, { keyCode: "Space" });
attachCapture(window, buffer, { keyCode: "Space" });

function setMode(next: CaptureMode): void {
  if (next === "unlock" && !controller.canUnlock) {
    statusEl.textContent = "enroll a template first";
    return;
  }
  mode = next;
  buffer.mode = next;
  buffer.clear();
  tone.stop();
  document.querySelectorAll("[data-mode]").forEach((btn) => {
    btn.classList.toggle("active", btn.getAttribute("data-mode") === next);
  });
  $("save-template").toggleAttribute("hidden", next !== "enroll");
  $("give-up").toggleAttribute("hidden", next !== "unlock");
  if (next === "training") statusEl.textContent = "training: tone while pressed, nothing recorded";
  if (next === "enroll") statusEl.textContent = "tap your phrase, then save";
  if (next === "unlock") void controller.startUnlock();
}

document.querySelectorAll("[data-mode]").forEach((btn) => {
  btn.addEventListener("click", (ev) => {
    ev.stopPropagation();
    setMode(btn.getAttribute("data-mode") as CaptureMode);
  });
});

$("save-template").addEventListener("click", async (ev) => {
  ev.stopPropagation();
  if (await controller.saveTemplate([...buffer.events])) buffer.clear();
});

$("give-up").addEventListener("click", (ev) => {
  ev.stopPropagation();
  buffer.clear();
  void controller.giveUp();
});

void client.health().then((ok) => {
  if (!ok) {
    statusEl.textContent = `cannot reach service at ${client.baseUrl} - is "tapphrase serve" running?`;
    surface.classList.add("unlock-failure");
  } else {
    setMode("training");
  }
});
