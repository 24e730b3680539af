/* tslint:disable */
/* eslint-disable */

export class Profile {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    density(): Float64Array;
    duration(): number;
    fidelity(): number;
    probability(): number;
    target(): Float64Array;
    x(): Float64Array;
}

export function readoutCurve(kind: string, gamma: number, points: number): Float64Array;

export function searchCurve(g: number, total_probability: number, max_rounds: number): Float64Array;

export function transportProfile(g: number, d_over_x0: number, total_probability: number, rounds: number): Profile;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_profile_free: (a: number, b: number) => void;
    readonly profile_density: (a: number) => [number, number];
    readonly profile_duration: (a: number) => number;
    readonly profile_fidelity: (a: number) => number;
    readonly profile_probability: (a: number) => number;
    readonly profile_target: (a: number) => [number, number];
    readonly profile_x: (a: number) => [number, number];
    readonly readoutCurve: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly searchCurve: (a: number, b: number, c: number) => [number, number, number, number];
    readonly transportProfile: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
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
