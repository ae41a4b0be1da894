/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_pulse_free: (a: number, b: number) => void;
export const __wbg_spectrum_free: (a: number, b: number) => void;
export const __wbg_sweep_free: (a: number, b: number) => void;
export const controlSweep: (a: number, b: number) => [number, number, number];
export const propagate: (a: number, b: number, c: number) => [number, number, number];
export const pulse_analytic: (a: number) => [number, number];
export const pulse_attenuation: (a: number) => number;
export const pulse_delay: (a: number) => number;
export const pulse_input: (a: number) => [number, number];
export const pulse_output: (a: number) => [number, number];
export const pulse_predictedDelay: (a: number) => number;
export const pulse_times: (a: number) => [number, number];
export const spectrum: (a: number, b: number, c: number) => [number, number, number];
export const spectrum_chiIm: (a: number) => [number, number];
export const spectrum_chiRe: (a: number) => [number, number];
export const spectrum_groupIndex: (a: number) => [number, number];
export const spectrum_groupIndexCenter: (a: number) => number;
export const spectrum_offset: (a: number) => [number, number];
export const spectrum_windowWidth: (a: number) => number;
export const sweep_argmax: (a: number) => number;
export const sweep_chiIm: (a: number) => [number, number];
export const sweep_groupIndex: (a: number) => [number, number];
export const sweep_omega2: (a: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
