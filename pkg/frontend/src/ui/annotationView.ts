/** Side-by-side annotation editor: highlights, tooltips, quick actions. */

import type { ApiClient } from "../api.js";
import { utf16ToCp } from "../codepoints.js";
import { segmentText, spanColor, tooltipText } from "../highlight.js";
import type { AnnotationSession, ViewState } from "../state.js";
import { CATEGORIES, SEVERITIES, type SpanDoc } from "../types.js";

export interface AnnotationViewOptions {
  api: ApiClient;
  session: AnnotationSession;
  container: HTMLElement;
  onBack: () => void;
}

export class AnnotationView {
  private popup: HTMLElement | null = null;
  private editor: HTMLTextAreaElement | null = null;

  constructor(private options: AnnotationViewOptions) {
    options.session.subscribe((state) => this.render(state));
  }

  private render(state: ViewState): void {
    const { container } = this.options;
    if (!state.pair || !state.draft) return;
    this.closePopup();
    container.replaceChildren();

    const header = el("div", "annotation-header");
    const back = el("button", "", "‹ back") as HTMLButtonElement;
    back.addEventListener("click", () => this.options.onBack());
    header.append(
      back,
      el("span", `status-badge status-${state.pair.status}`, state.pair.status),
      el("span", "lang-label", `${state.pair.source_lang} → ${state.pair.target_lang}`),
    );
    const detect = el("button", "detect-button",
      state.detecting ? "detecting…" : "detect errors") as HTMLButtonElement;
    detect.disabled = state.detecting;
    detect.addEventListener("click", () => {
      void this.options.session.detect(this.options.api);
    });
    header.append(detect);
    container.append(header);

    const panes = el("div", "panes");
    panes.append(
      this.renderPane("source", state.pair.source_text, state.draft.spans),
      this.renderPane("translation", state.draft.corrected_text, state.draft.spans),
    );
    container.append(panes);

    container.append(this.renderEditor(state));
    container.append(this.renderNotices(state));
    container.append(this.renderFooter(state));
  }

  private renderPane(side: "source" | "translation", text: string, spans: SpanDoc[]): HTMLElement {
    const pane = el("div", `pane pane-${side}`);
    pane.append(el("h3", "", side === "source" ? "source" : "corrected translation"));
    const body = el("p", "pane-text");
    for (const segment of segmentText(text, spans, side)) {
      if (!segment.span) {
        body.append(document.createTextNode(segment.text));
        continue;
      }
      const mark = el("mark", `hl severity-${segment.span.severity.toLowerCase()}`);
      mark.textContent = segment.text;
      mark.style.backgroundColor = spanColor(segment.span);
      mark.title = tooltipText(segment.span);
      mark.dataset.spanId = segment.span.span_id;
      if (side === "translation") {
        mark.addEventListener("click", (event) =>
          this.openSpanPopup(segment.span!, event as MouseEvent),
        );
      }
      body.append(mark);
    }
    if (side === "translation") {
      body.addEventListener("mouseup", (event) => this.maybeOfferInsert(event as MouseEvent));
    }
    pane.append(body);
    return pane;
  }

  private renderEditor(state: ViewState): HTMLElement {
    const wrap = el("div", "editor");
    wrap.append(el("h3", "", "post-edit"));
    const area = document.createElement("textarea");
    area.className = "editor-area";
    area.value = state.draft!.corrected_text;
    area.rows = 4;
    area.addEventListener("input", () => {
      this.options.session.applyTextEdit(area.value);
    });
    this.editor = area;
    wrap.append(area);
    return wrap;
  }

  private renderNotices(state: ViewState): HTMLElement {
    const box = el("div", "notices");
    for (const notice of state.notices.slice(-4)) {
      box.append(el("div", `notice notice-${notice.kind}`, notice.text));
    }
    for (const violation of state.violations) {
      box.append(el("div", "notice notice-error", violation.message));
    }
    if (state.conflictVersion !== null) {
      const dialog = el("div", "conflict-dialog");
      dialog.append(
        el("p", "", `someone saved version ${state.conflictVersion} while you edited;` +
          " your draft is untouched"),
      );
      const retry = el("button", "", "retry against latest") as HTMLButtonElement;
      retry.addEventListener("click", () => {
        this.options.session.adoptServerVersion();
        void this.options.session.submit(this.options.api);
      });
      dialog.append(retry);
      box.append(dialog);
    }
    return box;
  }

  private renderFooter(state: ViewState): HTMLElement {
    const footer = el("div", "footer");
    const submit = el("button", "submit-button",
      state.pendingSave ? "submit changes" : "submitted") as HTMLButtonElement;
    submit.disabled = !this.options.session.canSubmit();
    submit.addEventListener("click", () => {
      void this.options.session.submit(this.options.api);
    });
    footer.append(submit);

    for (const format of ["json", "csv"] as const) {
      const link = document.createElement("a");
      link.className = "export-link";
      link.textContent = `export ${format}`;
      if (state.datasetId) {
        link.href = this.options.api.exportUrl(state.datasetId, format);
        link.setAttribute("download", `${state.datasetId}.${format}`);
      }
      footer.append(link);
    }
    return footer;
  }

  /** Quick actions near the cursor: insert over a selection. */
  private maybeOfferInsert(event: MouseEvent): void {
    const selection = window.getSelection();
    const state = this.options.session.current;
    if (!selection || selection.isCollapsed || !state.draft) return;
    const text = selection.toString();
    if (!text) return;
    const corrected = state.draft.corrected_text;
    const anchor = corrected.indexOf(text);
    if (anchor < 0) return;
    const start = utf16ToCp(corrected, anchor);
    const end = utf16ToCp(corrected, anchor + text.length);

    const popup = this.openPopup(event);
    if (!this.options.session.canInsertAt(start, end)) {
      popup.append(el("div", "popup-hint", "overlaps an existing span"));
      return;
    }
    const categoryPick = pickList(CATEGORIES);
    const severityPick = pickList(SEVERITIES);
    const add = el("button", "", "add span") as HTMLButtonElement;
    add.addEventListener("click", () => {
      this.options.session.insertSpan({
        category: categoryPick.value,
        severity: severityPick.value,
        source_start: null,
        source_end: null,
        translation_start: start,
        translation_end: end,
        explanation: "",
        provenance: "human",
      });
      this.closePopup();
    });
    popup.append(label("insert:"), categoryPick, severityPick, add);
  }

  /** Quick actions on an existing highlight: delete or relabel. */
  private openSpanPopup(span: SpanDoc, event: MouseEvent): void {
    const popup = this.openPopup(event);
    const categoryPick = pickList(CATEGORIES, span.category);
    categoryPick.addEventListener("change", () => {
      this.options.session.updateSpan(span.span_id, { category: categoryPick.value });
    });
    const severityPick = pickList(SEVERITIES, span.severity);
    severityPick.addEventListener("change", () => {
      this.options.session.updateSpan(span.span_id, { severity: severityPick.value });
    });
    const remove = el("button", "danger", "delete span") as HTMLButtonElement;
    remove.addEventListener("click", () => {
      this.options.session.deleteSpan(span.span_id);
      this.closePopup();
    });
    popup.append(label(`${span.span_id}:`), categoryPick, severityPick, remove);
  }

  private openPopup(event: MouseEvent): HTMLElement {
    this.closePopup();
    const popup = el("div", "quick-popup");
    popup.style.left = `${event.pageX + 8}px`;
    popup.style.top = `${event.pageY + 8}px`;
    document.body.append(popup);
    this.popup = popup;
    return popup;
  }

  private closePopup(): void {
    this.popup?.remove();
    this.popup = null;
  }
}

function el(tag: string, className = "", text = ""): HTMLElement {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text) node.textContent = text;
  return node;
}

function label(text: string): HTMLElement {
  return el("span", "popup-label", text);
}

function pickList(values: readonly string[], selected?: string): HTMLSelectElement {
  const select = document.createElement("select");
  for (const value of values) {
    const option = document.createElement("option");
    option.value = value;
    option.textContent = value;
    if (value === selected) option.selected = true;
    select.append(option);
  }
  return select;
}
