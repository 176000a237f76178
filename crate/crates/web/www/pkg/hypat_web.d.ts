/* tslint:disable */
/* eslint-disable */

/**
 * `attribute<TAB>cut,cut,…` per numeric attribute, per class.
 */
export function cut_points(csv: string, target: string): string;

/**
 * The JSON report of mining `csv` (header row, class in the last column).
 */
export function mine_csv(csv: string, target: string, measure: string): string;

/**
 * Miner against oracle on `count` generated instances from `seed`; the
 * first differing seed, or `None`.
 */
export function verify_random(seed: number, count: number, measure: string): number | undefined;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly cut_points: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly mine_csv: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly verify_random: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly __externref_table_alloc: () => number;
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
