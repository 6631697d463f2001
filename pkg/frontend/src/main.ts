import { ApiClient } from "./api.js";
import { ScreeningController } from "./controller.js";
import { CLASS_COLORS, renderToElement } from "./highlights.js";
import { ScreeningSession } from "./session.js";
import { CLASS_ORDER, ClassLetter, Decision } from "./types.js";

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
};

const serviceUrl =
  new URLSearchParams(window.location.search).get("service") ?? "http://127.0.0.1:8000";
const session = new ScreeningSession(window.localStorage);
const controller = new ScreeningController(session, new ApiClient(serviceUrl));

const docEl = $("document");
const queueEl = $("queue");
const sliderEl = $<HTMLInputElement>("threshold");
const sliderValueEl = $("threshold-value");
const togglesEl = $("class-toggles");
const statusEl = $("status");

function paint(): void {
  renderToElement(docEl, controller.render());
}

function refreshQueue(): void {
  queueEl.textContent = "";
  for (const item of session.queue) {
    const li = document.createElement("li");
    const button = document.createElement("button");
    button.textContent = `${item.id} [${session.decisionFor(item.id)}]`;
    button.addEventListener("click", () => {
      void controller.selectAbstract(item.id).then(() => {
        statusEl.textContent = `viewing ${item.id}`;
        paint();
        refreshQueue();
      });
    });
    li.appendChild(button);
    queueEl.appendChild(li);
  }
}

for (const cls of CLASS_ORDER) {
  const label = document.createElement("label");
  const box = document.createElement("input");
  box.type = "checkbox";
  box.checked = session.enabledClasses.includes(cls);
  box.addEventListener("change", () => {
    controller.toggleClass(cls, box.checked);
    paint();
  });
  label.appendChild(box);
  const swatch = document.createElement("span");
  swatch.className = "swatch";
  swatch.style.backgroundColor = CLASS_COLORS[cls as ClassLetter];
  label.appendChild(swatch);
  label.appendChild(document.createTextNode(cls));
  togglesEl.appendChild(label);
}

sliderEl.value = String(session.threshold);
sliderValueEl.textContent = session.threshold.toFixed(2);
sliderEl.addEventListener("input", () => {
  // live re-render from cached probabilities; no request is issued here
  const t = Number(sliderEl.value);
  sliderValueEl.textContent = t.toFixed(2);
  controller.setThreshold(t);
  paint();
});

$("add").addEventListener("click", () => {
  const idInput = $<HTMLInputElement>("abstract-id");
  const textInput = $<HTMLTextAreaElement>("abstract-text");
  if (!idInput.value.trim() || !textInput.value.trim()) {
    statusEl.textContent = "both an id and text are required";
    return;
  }
  try {
    session.addAbstract(idInput.value.trim(), textInput.value.trim());
  } catch (err) {
    statusEl.textContent = String(err);
    return;
  }
  idInput.value = "";
  textInput.value = "";
  refreshQueue();
});

for (const decision of ["INCLUDE", "EXCLUDE", "UNSURE"] as Decision[]) {
  $(`decide-${decision.toLowerCase()}`).addEventListener("click", () => {
    try {
      controller.decide(decision);
      refreshQueue();
      statusEl.textContent = `recorded ${decision}`;
    } catch (err) {
      statusEl.textContent = String(err);
    }
  });
}

$("decide-undo").addEventListener("click", () => {
  controller.undo();
  refreshQueue();
  statusEl.textContent = "decision cleared";
});

$("load-spans").addEventListener("click", () => {
  void controller
    .loadSpans(["P", "I", "O"])
    .then(() => paint())
    .catch((err) => (statusEl.textContent = String(err)));
});

$("export").addEventListener("click", () => {
  const blob = new Blob([session.exportCsv()], { type: "text/csv" });
  const a = document.createElement("a");
  a.href = URL.createObjectURL(blob);
  a.download = "screening-decisions.csv";
  a.click();
  URL.revokeObjectURL(a.href);
});

refreshQueue();
paint();
