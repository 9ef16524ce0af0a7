import { Client } from "./api.js";
import { init } from "./main.js";
init(document, new Client(""));
