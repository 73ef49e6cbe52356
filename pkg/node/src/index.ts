/**
 * Thin client for the `cophe` evaluation CLI.
 *
 * The binding contains no metric logic: it serialises label lists to JSONL,
 * invokes the CLI with `--format json`, and returns the parsed report
 * unchanged, so it is count-for-count identical to a direct CLI run.
 */

import { spawnSync } from "node:child_process";
import { mkdtempSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { CopheError, errorFromCli } from "./errors.js";

export { CopheError, errorFromCli } from "./errors.js";
export type { CopheErrorName } from "./errors.js";

export const VERSION = "0.1.0";

export type ModeName = "flat" | "set" | "cophe" | "all";
export type LevelName = "e1" | "e0" | "chapter";

/** One document's labels: a doc id and its code strings. */
export type LabeledDoc = [docId: string, codes: string[]];

export interface EvaluateOptions {
  mode?: ModeName;
  maxLevel?: LevelName;
  chaptersPath?: string;
  strict?: boolean;
  perLevel?: boolean;
  perCode?: boolean;
  /** argv of the evaluator CLI; defaults to $COPHE_BIN (split) or ["cophe"]. */
  bin?: string[];
}

export interface MetricCell {
  tp: number;
  fp: number;
  fn: number;
  precision: number;
  recall: number;
  f1: number;
  precision_pct: number;
  recall_pct: number;
  f1_pct: number;
  precision_defined: boolean;
  recall_defined: boolean;
  f1_defined: boolean;
}

export interface CountCell {
  tp: number;
  fp: number;
  fn: number;
}

export interface ModeReport {
  overall: MetricCell;
  per_level?: Record<string, MetricCell>;
  per_node?: Record<string, Record<string, CountCell>>;
}

export interface ReportConfig {
  modes: string[];
  max_level: string;
  strict: boolean;
  per_level: boolean;
  per_code: boolean;
  chapter_table_sha256: string | null;
}

export interface ReportDocument {
  tool: string;
  version: string;
  config: ReportConfig;
  warnings: string[];
  results: Record<string, ModeReport>;
}

function cliArgv(options: EvaluateOptions): string[] {
  if (options.bin && options.bin.length > 0) {
    return options.bin;
  }
  const fromEnv = process.env.COPHE_BIN;
  if (fromEnv && fromEnv.trim()) {
    return fromEnv.trim().split(/\s+/);
  }
  return ["cophe"];
}

function buildArgs(predPath: string, goldPath: string, options: EvaluateOptions): string[] {
  const args = ["--pred", predPath, "--gold", goldPath, "--format", "json"];
  if (options.mode) args.push("--mode", options.mode);
  if (options.maxLevel) args.push("--max-level", options.maxLevel);
  if (options.chaptersPath) args.push("--chapters", options.chaptersPath);
  if (options.strict) args.push("--strict");
  if (options.perLevel) args.push("--per-level");
  if (options.perCode) args.push("--per-code");
  return args;
}

/** Evaluate two corpus files already on disk (JSONL, or CSV by extension). */
export function evaluateFiles(
  predPath: string,
  goldPath: string,
  options: EvaluateOptions = {},
): ReportDocument {
  const [command, ...prefix] = cliArgv(options);
  const result = spawnSync(command, [...prefix, ...buildArgs(predPath, goldPath, options)], {
    encoding: "utf8",
    maxBuffer: 64 * 1024 * 1024,
  });
  if (result.error) {
    const cause = result.error as NodeJS.ErrnoException;
    if (cause.code === "ENOENT") {
      throw new CopheError("CliNotFound", `evaluator not found: ${command}`);
    }
    throw new CopheError("CliFailure", String(cause));
  }
  if (result.status !== 0) {
    throw errorFromCli(result.status ?? -1, result.stderr ?? "");
  }
  try {
    return JSON.parse(result.stdout) as ReportDocument;
  } catch {
    throw new CopheError("CliFailure", "evaluator produced unparseable JSON", {
      exitStatus: 0,
    });
  }
}

function toJsonl(docs: LabeledDoc[]): string {
  return docs
    .map(([docId, codes]) => JSON.stringify({ doc_id: docId, codes }) + "\n")
    .join("");
}

/** Evaluate in-memory label lists; identical to the CLI on equivalent files. */
export function evaluateLabels(
  pred: LabeledDoc[],
  gold: LabeledDoc[],
  options: EvaluateOptions = {},
): ReportDocument {
  const dir = mkdtempSync(join(tmpdir(), "cophe-"));
  try {
    const predPath = join(dir, "pred.jsonl");
    const goldPath = join(dir, "gold.jsonl");
    writeFileSync(predPath, toJsonl(pred), "utf8");
    writeFileSync(goldPath, toJsonl(gold), "utf8");
    return evaluateFiles(predPath, goldPath, options);
  } finally {
    rmSync(dir, { recursive: true, force: true });
  }
}
