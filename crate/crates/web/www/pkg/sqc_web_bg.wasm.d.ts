/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_profile_free: (a: number, b: number) => void;
export const profile_density: (a: number) => [number, number];
export const profile_duration: (a: number) => number;
export const profile_fidelity: (a: number) => number;
export const profile_probability: (a: number) => number;
export const profile_target: (a: number) => [number, number];
export const profile_x: (a: number) => [number, number];
export const readoutCurve: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const searchCurve: (a: number, b: number, c: number) => [number, number, number, number];
export const transportProfile: (a: number, b: number, c: number, d: number) => [number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_start: () => void;
