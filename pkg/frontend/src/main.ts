import { ApiClient, ApiError } from "./api.js";
import { composeAnnotationText, powerLossAt, validSelection } from "./findings.js";
import { columnMap, xToT, ColumnMap } from "./series.js";
import {
  clearSelection,
  initView,
  playbackStep,
  setCursor,
  setPlayback,
  setSelection,
  setWindow,
  toggleChannel,
} from "./state.js";
import { drawSchematic } from "./schematic.js";
import { drawStrip, drawTimeline, GROUP_COLORS } from "./strips.js";
import {
  Annotation,
  ChannelInfo,
  FindingsDoc,
  Meta,
  Playback,
  Row,
  ViewState,
} from "./types.js";

const $ = <T extends HTMLElement>(id: string): T =>
  document.getElementById(id) as T;

interface Session {
  api: ApiClient;
  meta: Meta;
  cols: ColumnMap;
  rows: Row[];
  findings: FindingsDoc;
  annotations: Annotation[];
}

let session: Session | null = null;
let view: ViewState | null = null;
let drawnView: ViewState | null = null;
const stripCanvases = new Map<string, HTMLCanvasElement>();

function defaultBase(): string {
  const param = new URLSearchParams(location.search).get("api");
  return param ?? "http://127.0.0.1:8790";
}

function showBanner(message: string): void {
  $("bannerMsg").textContent = message;
  $("banner").style.display = "flex";
}

function hideBanner(): void {
  $("banner").style.display = "none";
}

async function loadSession(): Promise<void> {
  const api = new ApiClient(($("baseInput") as HTMLInputElement).value);
  hideBanner();
  $("app").style.display = "none";
  $("emptyState").style.display = "none";
  try {
    const meta = await api.meta();
    if (meta.records === 0) {
      $("emptyState").style.display = "block";
      return;
    }
    const [slice, findings, annotations] = await Promise.all([
      api.log(meta.t0, meta.t1),
      api.findings(),
      api.annotations(),
    ]);
    session = {
      api,
      meta,
      cols: columnMap(meta),
      rows: slice.rows,
      findings,
      annotations,
    };
    view = initView(meta);
    drawnView = null;
    buildUi();
    render();
  } catch (err) {
    console.error("session load failed", err);
    showBanner(`could not load session: ${(err as Error).message}`);
  }
}

function buildUi(): void {
  const s = session!;
  $("app").style.display = "block";
  $("sessionInfo").textContent =
    `${s.meta.session.session_id} on ${s.meta.session.device_id}, ` +
    `${s.meta.records} records, t = [${s.meta.t0}, ${s.meta.t1}) s`;

  // channel strips in the recorder's two groups of six
  const groups: Array<[string, (c: ChannelInfo) => boolean]> = [
    ["stripsEmg", (c) => c.group === "emg" || c.group === "decision"],
    ["stripsMech", (c) => c.group !== "emg" && c.group !== "decision"],
  ];
  stripCanvases.clear();
  for (const [containerId, member] of groups) {
    const container = $(containerId);
    container.innerHTML = "";
    for (const ch of s.meta.channels.filter(member)) {
      const strip = document.createElement("div");
      strip.className = "strip";

      const label = document.createElement("label");
      label.className = "stripLabel";
      const box = document.createElement("input");
      box.type = "checkbox";
      box.checked = true;
      box.addEventListener("change", () => {
        view = toggleChannel(view!, ch.id);
        render();
      });
      label.appendChild(box);
      label.appendChild(
        document.createTextNode(` ${ch.id} (${ch.unit})`),
      );
      label.style.color = GROUP_COLORS[ch.group] ?? "#ccc";

      const canvas = document.createElement("canvas");
      canvas.width = 900;
      canvas.height = 64;
      canvas.className = "stripCanvas";
      attachScrub(canvas, () => view!.window);
      stripCanvases.set(ch.id, canvas);

      strip.appendChild(label);
      strip.appendChild(canvas);
      container.appendChild(strip);
    }
  }

  const annChannel = $("annChannel") as HTMLSelectElement;
  annChannel.innerHTML = '<option value="">(whole record)</option>';
  for (const ch of s.meta.channels) {
    const opt = document.createElement("option");
    opt.value = ch.id;
    opt.textContent = ch.id;
    annChannel.appendChild(opt);
  }

  const list = $("findingsList");
  list.innerHTML = "";
  for (const f of s.findings.findings) {
    const li = document.createElement("li");
    li.textContent =
      `${f.kind} [${f.t0}, ${f.t1}) ${f.confidence}: ${f.note}`;
    li.addEventListener("click", () => {
      view = setSelection(setCursor(view!, f.t0), f.t0, f.t1);
      render();
    });
    list.appendChild(li);
  }

  const report = s.findings.report;
  $("reportBox").innerHTML = "";
  const sections: Array<[string, string[]]> = [
    ["What happened?", report.what_happened],
    ["Why did it happen?", report.why],
    ["How do we prevent it happening again?", report.prevention],
  ];
  for (const [title, lines] of sections) {
    const h = document.createElement("h3");
    h.textContent = title;
    $("reportBox").appendChild(h);
    for (const line of lines) {
      const p = document.createElement("p");
      p.textContent = line;
      $("reportBox").appendChild(p);
    }
  }

  attachScrub($("timeline") as HTMLCanvasElement, () => [
    session!.meta.t0,
    session!.meta.t1,
  ]);
  renderAnnotations();
}

/** Click/drag scrubs; shift+drag selects an interval. */
function attachScrub(
  canvas: HTMLCanvasElement,
  windowOf: () => [number, number],
): void {
  let selecting: number | null = null;
  const tAt = (ev: MouseEvent) => {
    const rect = canvas.getBoundingClientRect();
    const x = ((ev.clientX - rect.left) / rect.width) * canvas.width;
    return xToT(x, windowOf(), canvas.width);
  };
  canvas.addEventListener("mousedown", (ev) => {
    if (!view) return;
    const t = tAt(ev);
    if (ev.shiftKey) {
      selecting = t;
    } else {
      view = setCursor(view, t);
      render();
    }
  });
  canvas.addEventListener("mousemove", (ev) => {
    if (!view || !(ev.buttons & 1)) return;
    const t = tAt(ev);
    if (selecting !== null) {
      view = setSelection(view, selecting, t);
    } else {
      view = setCursor(view, t);
    }
    render();
  });
  canvas.addEventListener("mouseup", () => {
    selecting = null;
    syncSelectionInputs();
  });
}

function syncSelectionInputs(): void {
  if (!view) return;
  const [a, b] = view.selection ?? [NaN, NaN];
  ($("selT0") as HTMLInputElement).value = Number.isNaN(a) ? "" : String(a);
  ($("selT1") as HTMLInputElement).value = Number.isNaN(b) ? "" : String(b);
}

function renderAnnotations(): void {
  const s = session!;
  const list = $("annList");
  list.innerHTML = "";
  for (const a of s.annotations) {
    const li = document.createElement("li");
    const where = a.channel ? ` on ${a.channel}` : "";
    li.textContent = `#${a.id} [${a.t0}, ${a.t1})${where}: ${a.text}`;
    list.appendChild(li);
  }
}

function render(): void {
  if (!session || !view) return;
  const s = session;
  const v = view;
  drawnView = v;

  drawTimeline(
    $("timeline") as HTMLCanvasElement,
    [s.meta.t0, s.meta.t1],
    s.findings.findings,
    s.annotations,
    v.window,
    v.cursor,
    v.selection,
  );

  for (const ch of s.meta.channels) {
    const canvas = stripCanvases.get(ch.id);
    if (!canvas) continue;
    const visible = v.visible.has(ch.id);
    canvas.style.display = visible ? "block" : "none";
    if (visible) {
      drawStrip(canvas, s.rows, s.cols, ch, v.window, v.cursor, v.selection);
    }
  }

  const t = Math.floor(v.cursor);
  const row = s.rows[t - s.meta.t0];
  $("cursorReadout").textContent = `t = ${t} s`;

  const dl = $("readout");
  dl.innerHTML = "";
  if (row) {
    for (const ch of s.meta.channels) {
      const dt = document.createElement("dt");
      dt.textContent = ch.id;
      const dd = document.createElement("dd");
      dd.textContent = `${row[s.cols.channel[ch.id]]} ${ch.unit}`;
      dl.appendChild(dt);
      dl.appendChild(dd);
    }
    const flags = document.createElement("dd");
    flags.className = "flags";
    flags.textContent =
      `hb=${row[s.cols.hb]} synth=${row[s.cols.synth]}`;
    dl.appendChild(flags);
  }

  const lost = powerLossAt(s.findings.findings, t) !== null;
  drawSchematic($("schematic") as HTMLCanvasElement, {
    posL: row ? row[s.cols.channel["pos_l"]] : null,
    posR: row ? row[s.cols.channel["pos_r"]] : null,
    powerLost: lost,
  });

  for (const mode of ["paused", "x1", "x10"] as Playback[]) {
    $(`btn_${mode}`).classList.toggle("active", v.playback === mode);
  }
}

function setRate(p: Playback): void {
  if (!view) return;
  view = setPlayback(view, p);
  render();
}

async function submitAnnotation(): Promise<void> {
  if (!session || !view) return;
  const msg = $("annMsg");
  msg.textContent = "";
  const t0 = Number(($("selT0") as HTMLInputElement).value);
  const t1 = Number(($("selT1") as HTMLInputElement).value);
  view = setSelection(view, t0, t1);
  if (!validSelection(view.selection)) {
    msg.textContent = "selection must be a non-empty [t0, t1) interval";
    render();
    return;
  }
  const textEl = $("annText") as HTMLInputElement;
  if (textEl.value.trim() === "") {
    msg.textContent = "annotation text is empty";
    return;
  }
  const channel = ($("annChannel") as HTMLSelectElement).value || null;
  const text = composeAnnotationText(
    textEl.value,
    view.selection,
    session.findings.findings,
  );
  try {
    await session.api.postAnnotation({
      t0: view.selection[0],
      t1: view.selection[1],
      text,
      channel,
    });
    // refetch rather than trusting local state: the service owns the ids
    session.annotations = await session.api.annotations();
    textEl.value = "";
    msg.textContent = "saved";
    renderAnnotations();
    render();
  } catch (err) {
    // keep the form contents so a retry is one click
    msg.textContent =
      err instanceof ApiError
        ? `rejected (${err.status}): ${err.detail}`
        : `network failure, annotation not saved; retry when reachable`;
  }
}

function tick(prev: number) {
  return (now: number): void => {
    if (view && view.playback !== "paused") {
      view = playbackStep(view, (now - prev) / 1000);
      if (view !== drawnView) render();
    }
    requestAnimationFrame(tick(now));
  };
}

function wire(): void {
  ($("baseInput") as HTMLInputElement).value = defaultBase();
  $("loadBtn").addEventListener("click", () => void loadSession());
  $("retryBtn").addEventListener("click", () => void loadSession());
  $("btn_paused").addEventListener("click", () => setRate("paused"));
  $("btn_x1").addEventListener("click", () => setRate("x1"));
  $("btn_x10").addEventListener("click", () => setRate("x10"));
  $("zoomSel").addEventListener("click", () => {
    if (!view || !validSelection(view.selection)) return;
    view = setWindow(view, view.selection[0], view.selection[1]);
    render();
  });
  $("zoomFull").addEventListener("click", () => {
    if (!view) return;
    view = setWindow(view, view.t0, view.t1);
    render();
  });
  $("clearSel").addEventListener("click", () => {
    if (!view) return;
    view = clearSelection(view);
    syncSelectionInputs();
    render();
  });
  $("annSubmit").addEventListener("click", () => void submitAnnotation());
  requestAnimationFrame(tick(performance.now()));
  void loadSession();
}

window.addEventListener("load", wire);
