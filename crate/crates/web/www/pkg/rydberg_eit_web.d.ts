/* tslint:disable */
/* eslint-disable */

export class Pulse {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly analytic: Float64Array;
    readonly attenuation: number;
    /**
     * Lab-frame delay, ns.
     */
    readonly delay: number;
    /**
     * |input envelope|, normalised to its peak.
     */
    readonly input: Float64Array;
    /**
     * |output envelope|, normalised to its own peak.
     */
    readonly output: Float64Array;
    /**
     * L / v_g, ns.
     */
    readonly predictedDelay: number;
    /**
     * Co-moving time, ns.
     */
    readonly times: Float64Array;
}

export class Spectrum {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly chiIm: Float64Array;
    readonly chiRe: Float64Array;
    readonly groupIndexCenter: number;
    readonly groupIndex: Float64Array;
    /**
     * Probe offsets, Grad/s.
     */
    readonly offset: Float64Array;
    /**
     * Transparency window width, Grad/s (0 when closed).
     */
    readonly windowWidth: number;
}

export class Sweep {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly argmax: number;
    readonly chiIm: Float64Array;
    readonly groupIndex: Float64Array;
    /**
     * Control Rabi frequencies, Grad/s.
     */
    readonly omega2: Float64Array;
}

export function controlSweep(max_grad: number, points: number): Sweep;

export function propagate(omega2_grad: number, length_um: number, z_steps: number): Pulse;

export function spectrum(omega2_grad: number, half_span_grad: number, points: number): Spectrum;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_pulse_free: (a: number, b: number) => void;
    readonly __wbg_spectrum_free: (a: number, b: number) => void;
    readonly __wbg_sweep_free: (a: number, b: number) => void;
    readonly controlSweep: (a: number, b: number) => [number, number, number];
    readonly propagate: (a: number, b: number, c: number) => [number, number, number];
    readonly pulse_analytic: (a: number) => [number, number];
    readonly pulse_attenuation: (a: number) => number;
    readonly pulse_delay: (a: number) => number;
    readonly pulse_input: (a: number) => [number, number];
    readonly pulse_output: (a: number) => [number, number];
    readonly pulse_predictedDelay: (a: number) => number;
    readonly pulse_times: (a: number) => [number, number];
    readonly spectrum: (a: number, b: number, c: number) => [number, number, number];
    readonly spectrum_chiIm: (a: number) => [number, number];
    readonly spectrum_chiRe: (a: number) => [number, number];
    readonly spectrum_groupIndex: (a: number) => [number, number];
    readonly spectrum_groupIndexCenter: (a: number) => number;
    readonly spectrum_offset: (a: number) => [number, number];
    readonly spectrum_windowWidth: (a: number) => number;
    readonly sweep_argmax: (a: number) => number;
    readonly sweep_chiIm: (a: number) => [number, number];
    readonly sweep_groupIndex: (a: number) => [number, number];
    readonly sweep_omega2: (a: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
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
