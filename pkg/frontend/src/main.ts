import { startApp } from "./ui/app.js";

startApp(document.getElementById("app")!);
