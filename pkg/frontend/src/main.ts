import { mountConsole } from "./app";

const root = document.getElementById("console");
if (root) {
  mountConsole(root);
}
