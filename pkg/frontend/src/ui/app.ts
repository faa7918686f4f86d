/** Wires the pieces into a single-page client. */

import { ApiClient } from "../api.js";
import { AnnotationSession } from "../state.js";
import { AnnotationView } from "./annotationView.js";
import { DatabaseView } from "./databaseView.js";

export function startApp(root: HTMLElement): void {
  const params = new URLSearchParams(window.location.search);
  const baseUrl = params.get("server") ?? "http://127.0.0.1:8080";
  const datasetId = params.get("dataset") ?? "demo";
  const annotatorId = params.get("annotator") ?? "anonymous";
  const token = params.get("token");

  const api = new ApiClient(baseUrl, token);
  const session = new AnnotationSession(annotatorId);
  session.setDataset(datasetId);

  const listContainer = document.createElement("div");
  const editorContainer = document.createElement("div");
  editorContainer.hidden = true;
  root.append(listContainer, editorContainer);

  const databaseView = new DatabaseView({
    api,
    container: listContainer,
    onSelect: (pairId) => {
      void openPair(pairId);
    },
  });

  new AnnotationView({
    api,
    session,
    container: editorContainer,
    onBack: () => {
      editorContainer.hidden = true;
      listContainer.hidden = false;
      void databaseView.show(datasetId);
    },
  });

  async function openPair(pairId: string): Promise<void> {
    const detail = await api.getPair(pairId);
    session.loadPair(detail);
    listContainer.hidden = true;
    editorContainer.hidden = false;
    // Error predictions load lazily on first open; the cache makes repeats free.
    if (detail.annotation === null) {
      void session.detect(api);
    }
  }

  void databaseView.show(datasetId);
}
