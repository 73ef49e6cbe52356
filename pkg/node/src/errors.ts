/** Error taxonomy of the evaluator core, plus binding-level failures. */
export type CopheErrorName =
  | "MalformedCode"
  | "UnknownChapter"
  | "FormatError"
  | "OverlapError"
  | "DuplicateLabel"
  | "DuplicateDocId"
  | "ModeMismatch"
  | "DocIdMismatch"
  | "ConfigError"
  | "InputError"
  | "CliNotFound"
  | "CliFailure";

const CORE_ERROR_NAMES: ReadonlySet<string> = new Set([
  "MalformedCode",
  "UnknownChapter",
  "FormatError",
  "OverlapError",
  "DuplicateLabel",
  "DuplicateDocId",
  "ModeMismatch",
  "DocIdMismatch",
  "ConfigError",
  "InputError",
]);

export class CopheError extends Error {
  public readonly code: CopheErrorName;
  /** Exit status of the CLI process, when one ran. */
  public readonly exitStatus?: number;
  /** Offending-record context reported by the core (file, line, doc). */
  public readonly detail?: string;

  constructor(
    code: CopheErrorName,
    message: string,
    options: { exitStatus?: number; detail?: string } = {},
  ) {
    super(message);
    this.name = "CopheError";
    this.code = code;
    this.exitStatus = options.exitStatus;
    this.detail = options.detail;
  }
}

const STDERR_PATTERN = /^cophe: ([A-Za-z]+): ([\s\S]*)$/m;

/** Map a failed CLI run onto the typed taxonomy, preserving the detail line. */
export function errorFromCli(exitStatus: number, stderr: string): CopheError {
  const match = STDERR_PATTERN.exec(stderr);
  if (match && CORE_ERROR_NAMES.has(match[1])) {
    const code = match[1] as CopheErrorName;
    const detail = match[2].trim();
    return new CopheError(code, `${code}: ${detail}`, { exitStatus, detail });
  }
  const text = stderr.trim() || `evaluator exited with status ${exitStatus}`;
  return new CopheError("CliFailure", text, { exitStatus, detail: text });
}
