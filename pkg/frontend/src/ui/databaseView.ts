/** Dataset browser: pair rows, status badges, pagination. */

import type { ApiClient } from "../api.js";
import type { PairPage, PairSummary } from "../types.js";

export interface DatabaseViewOptions {
  api: ApiClient;
  container: HTMLElement;
  onSelect: (pairId: string) => void;
  pageSize?: number;
}

function snippet(text: string, limit = 80): string {
  const chars = Array.from(text);
  return chars.length <= limit ? text : chars.slice(0, limit).join("") + "…";
}

export class DatabaseView {
  private page = 1;
  private datasetId: string | null = null;
  private statusFilter: string | null = null;

  constructor(private options: DatabaseViewOptions) {}

  async show(datasetId: string, page = 1, statusFilter: string | null = null): Promise<void> {
    this.datasetId = datasetId;
    this.page = page;
    this.statusFilter = statusFilter;
    const { api, container } = this.options;
    container.replaceChildren(loading());
    try {
      const result = await api.listPairs(datasetId, {
        page,
        pageSize: this.options.pageSize ?? 25,
        status: statusFilter ?? undefined,
      });
      container.replaceChildren(this.render(result));
    } catch (error) {
      container.replaceChildren(this.renderError(String(error)));
    }
  }

  private render(pageData: PairPage): HTMLElement {
    const root = el("div", "database-view");
    if (pageData.total === 0) {
      root.append(el("p", "empty-state", "No sentences here yet."));
      return root;
    }
    const table = el("table", "pair-table");
    const head = el("tr");
    for (const title of ["sentence", "MT output", "status", ""]) {
      head.append(el("th", "", title));
    }
    table.append(head);
    for (const pair of pageData.items) {
      table.append(this.renderRow(pair));
    }
    root.append(table, this.renderPager(pageData));
    return root;
  }

  private renderRow(pair: PairSummary): HTMLElement {
    const row = el("tr", "pair-row");
    row.append(
      el("td", "pair-source", snippet(pair.source_text)),
      el("td", "pair-mt", snippet(pair.mt_text)),
    );
    const badge = el("span", `status-badge status-${pair.status}`, pair.status);
    if (pair.detection_cached) {
      badge.title = "error predictions ready";
    }
    const badgeCell = el("td");
    badgeCell.append(badge);
    row.append(badgeCell);

    const open = el("button", "open-button", "annotate") as HTMLButtonElement;
    open.addEventListener("click", () => this.options.onSelect(pair.pair_id));
    const openCell = el("td");
    openCell.append(open);
    row.append(openCell);
    return row;
  }

  private renderPager(pageData: PairPage): HTMLElement {
    const pager = el("div", "pager");
    const prev = el("button", "", "‹ prev") as HTMLButtonElement;
    const next = el("button", "", "next ›") as HTMLButtonElement;
    prev.disabled = pageData.page <= 1;
    next.disabled = pageData.page >= pageData.total_pages;
    prev.addEventListener("click", () =>
      this.show(this.datasetId!, this.page - 1, this.statusFilter),
    );
    next.addEventListener("click", () =>
      this.show(this.datasetId!, this.page + 1, this.statusFilter),
    );
    pager.append(
      prev,
      el("span", "pager-label", `page ${pageData.page} / ${Math.max(1, pageData.total_pages)}`),
      next,
    );
    return pager;
  }

  private renderError(message: string): HTMLElement {
    const banner = el("div", "error-banner");
    banner.append(el("span", "", `could not load pairs: ${message}`));
    const retry = el("button", "", "retry") as HTMLButtonElement;
    retry.addEventListener("click", () => {
      if (this.datasetId) this.show(this.datasetId, this.page, this.statusFilter);
    });
    banner.append(retry);
    return banner;
  }
}

function el(tag: string, className = "", text = ""): HTMLElement {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text) node.textContent = text;
  return node;
}

function loading(): HTMLElement {
  return el("p", "loading", "loading…");
}
