/** Command line entry:
 *    plot --kind <k> --in <csv> --out <img>
 *    plot --all --dir <run_dir> [--out-dir <dir>]
 *
 * Exit codes: 0 success, 2 argument or schema problems (offending column
 * named on stderr), 3 filesystem errors.
 */

import yargs from "yargs";
import { SchemaError } from "./csv.js";
import { FIGURE_KINDS, isFigureKind, render, renderAll } from "./figures.js";

export async function runCli(argv: string[]): Promise<number> {
  let args;
  try {
    args = await yargs(argv)
      .option("kind", { type: "string", describe: `one of ${FIGURE_KINDS.join(", ")}` })
      .option("in", { type: "string", describe: "input CSV file" })
      .option("out", { type: "string", describe: "output SVG file" })
      .option("all", { type: "boolean", default: false, describe: "render every kind" })
      .option("dir", { type: "string", describe: "harness export directory (with --all)" })
      .option("out-dir", { type: "string", describe: "where --all writes SVGs (default: --dir)" })
      .strict()
      .fail((msg, err) => {
        throw err ?? new Error(msg);
      })
      .exitProcess(false)
      .parse();
  } catch (err) {
    console.error(`argument error: ${(err as Error).message}`);
    return 2;
  }

  try {
    if (args.all) {
      if (!args.dir) {
        console.error("argument error: --all requires --dir");
        return 2;
      }
      const written = renderAll(args.dir, args["out-dir"]);
      for (const file of written) console.log(file);
      return 0;
    }
    if (!args.kind || !args.in || !args.out) {
      console.error("argument error: need --kind, --in and --out (or --all --dir)");
      return 2;
    }
    if (!isFigureKind(args.kind)) {
      console.error(
        `argument error: unknown kind "${args.kind}" (expected one of ${FIGURE_KINDS.join(", ")})`
      );
      return 2;
    }
    render({ kind: args.kind, input: args.in, output: args.out });
    console.log(args.out);
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`schema error: ${err.message}`);
      return 2;
    }
    if (err instanceof Error && "code" in err) {
      console.error(`i/o error: ${err.message}`);
      return 3;
    }
    throw err;
  }
}
