#!/usr/bin/env python3
"""
Analizador de esquemas de compartición de secretos cuánticos (QQ / RCQ).

Subcomandos:
1. make: construye un esquema y lo escribe en un archivo de esquema
2. analyze: estructura de acceso QQ/RCQ, implicaciones entre ambas y cotas QECC
3. simulate: protocolo QQ (teletransporte + decodificación) o RCQ (clave aleatoria)
4. schema: imprime el esquema JSON del informe

Dependencias:
    - numpy / scipy: álgebra lineal densa y hash de Toeplitz
    - galois: aritmética en GF(q) para Reed-Solomon
    - tqdm: Barra de progreso
    - pydantic / pydantic-settings: modelos de informe y configuración

Uso:
    python qss_analyzer.py make --construction rs --k 2 --q 5 --out rs25.scheme
    python qss_analyzer.py analyze --scheme cgl23 --out reporte.json
    python qss_analyzer.py simulate rcq --scheme cgl23 --set 1,2 --rounds 10000 --seed 7
    python qss_analyzer.py simulate qq --scheme five_qubit --set 1,2,3 --trials 100

Códigos de salida:
    0 todo correcto, 1 fallo de una propiedad o conjunto no autorizado,
    2 error de uso, de formato o de construcción
"""

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from src.analysis.access import analyze_access_structure
from src.analysis.qecc import bound_report
from src.codes.scheme_file import load_scheme, save_scheme
from src.codes.schemes import (
    Scheme,
    bundled_scheme,
    cgl_qutrit_23,
    discard_shares,
    five_qubit_35,
    ghz_scheme,
    reed_solomon_threshold,
)
from src.config import settings
from src.exceptions import NotAuthorizedError, QSSError
from src.formatters import (
    format_access_table,
    format_qecc,
    format_qq_summary,
    format_session,
    ramp_comparison_line,
)
from src.protocols.qq import qq_trials
from src.protocols.rcq import NoiseKind, NoiseModel, RCQSimulator, SessionConfig, rcq_session
from src.report import build_report, report_schema, write_report
from src.utils import atomic_write_text, create_debug_directory, parse_subset, save_debug_file

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

QQ_FIDELITY_FLOOR = 1 - 1e-9


def resolve_scheme(value: str) -> Scheme:
    """Carga un archivo de esquema o construye un esquema incluido por nombre."""
    path = Path(value)
    if path.is_file():
        return load_scheme(path)
    try:
        return bundled_scheme(value)
    except KeyError:
        raise FileNotFoundError(f"'{value}' no es un archivo ni un esquema incluido")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description='Analiza y simula esquemas de compartición de secretos cuánticos.',
        epilog='Ejemplos:\n'
               '  python qss_analyzer.py analyze --scheme cgl23\n'
               '  python qss_analyzer.py simulate rcq --scheme cgl23 --set 1,2 --rounds 10000',
        formatter_class=argparse.RawDescriptionHelpFormatter
    )
    sub = parser.add_subparsers(dest='command', required=True)

    make = sub.add_parser('make', help='Construye un esquema y escribe su archivo')
    make.add_argument(
        '--construction', required=True, choices=['ghz', 'cgl23', 'five_qubit', 'rs'],
        help='Construcción a usar'
    )
    make.add_argument('--n', type=int, default=None, help='Número de acciones (ghz)')
    make.add_argument('--q', type=int, default=None, help='Dimensión de cada acción (ghz, rs)')
    make.add_argument('--k', type=int, default=None, help='Umbral k (rs)')
    make.add_argument('--drop', type=str, default=None, help='Acciones a descartar, p. ej. 5')
    make.add_argument('--explicit', action='store_true', help='Escribe todas las amplitudes')
    make.add_argument('--out', type=str, default=None, help='Archivo de salida')

    analyze = sub.add_parser('analyze', help='Estructura de acceso, implicaciones y cotas QECC')
    analyze.add_argument('--scheme', required=True, help='Archivo de esquema o nombre incluido')
    analyze.add_argument(
        '--tol', type=float, default=None,
        help=f'Tolerancia en bits (default: {settings.classification_tol})'
    )
    analyze.add_argument('--out', type=str, default=None, help='Informe JSON de salida')
    analyze.add_argument('--no-progress', action='store_true', help='Oculta la barra de progreso')

    simulate = sub.add_parser('simulate', help='Simula el protocolo QQ o RCQ')
    simulate.add_argument('protocol', choices=['qq', 'rcq'])
    simulate.add_argument('--scheme', required=True, help='Archivo de esquema o nombre incluido')
    simulate.add_argument('--set', required=True, help='Conjunto B, p. ej. 1,2')
    simulate.add_argument('--trials', type=int, default=100, help='Ensayos QQ (default: 100)')
    simulate.add_argument('--rounds', type=int, default=10000, help='Rondas RCQ (default: 10000)')
    simulate.add_argument(
        '--seed', type=int, default=settings.default_seed,
        help=f'Semilla (default: {settings.default_seed})'
    )
    simulate.add_argument(
        '--noise', type=str, default='none',
        help="Ruido kind:target:param, p. ej. depolarizing:3:0.2 o intercept_resend:1:random"
    )
    simulate.add_argument('--abort-qber', type=float, default=settings.abort_qber)
    simulate.add_argument('--test-fraction', type=float, default=settings.test_fraction)
    simulate.add_argument('--pa-rate', type=float, default=settings.pa_output_rate)
    simulate.add_argument('--out', type=str, default=None, help='Informe JSON de salida')
    simulate.add_argument('--round-log', type=str, default=None, help='Registro de rondas RCQ')
    simulate.add_argument(
        '--debug', action='store_true', default=settings.debug_enabled,
        help='Guarda el registro de rondas y la transcripción completa'
    )
    simulate.add_argument('--no-progress', action='store_true', help='Oculta la barra de progreso')

    sub.add_parser('schema', help='Imprime el esquema JSON del informe')
    return parser


def cmd_make(args) -> int:
    if args.construction == 'ghz':
        if args.n is None or args.q is None:
            print("❌ Error: ghz requiere --n y --q")
            return EXIT_USAGE
        scheme = ghz_scheme(args.n, args.q)
    elif args.construction == 'rs':
        if args.k is None or args.q is None:
            print("❌ Error: rs requiere --k y --q")
            return EXIT_USAGE
        scheme = reed_solomon_threshold(args.k, args.q)
    elif args.construction == 'cgl23':
        scheme = cgl_qutrit_23()
    else:
        scheme = five_qubit_35()

    if args.drop:
        scheme = discard_shares(scheme, parse_subset(args.drop))

    out = args.out or f"{scheme.name}.scheme"
    path = save_scheme(scheme, out, explicit=args.explicit)
    print(f"🔧 Esquema {scheme.name}: q={scheme.q}, κ={scheme.kappa}, n={scheme.n}")
    print(f"📝 Archivo guardado en: {path}")
    return EXIT_OK


def cmd_analyze(args, progress: bool) -> int:
    scheme = resolve_scheme(args.scheme)
    print(f"📄 Analizando: {scheme.name}")
    access = analyze_access_structure(scheme, tol=args.tol, progress=progress)
    qecc = bound_report(scheme, access)
    passed = access.implications.all_pass and qecc.all_pass

    print()
    print(format_access_table(access))
    print(format_qecc(qecc))

    report = build_report(
        'analyze', scheme,
        config={
            'tol': access.tolerance,
            'erasure_tol': settings.erasure_tol,
            'rank_cutoff': settings.rank_cutoff,
        },
        access=access,
        qecc=qecc,
        ramp_comparison=ramp_comparison_line(access),
        passed=passed,
    )
    out = args.out or f"reporte_{scheme.name}.json"
    write_report(report, out)
    print(f"\n📝 Informe guardado en: {out}")
    if passed:
        print("✅ Todas las propiedades se cumplen")
        return EXIT_OK
    print("❌ Alguna propiedad falla (ver informe)")
    return EXIT_FAILURE


def cmd_simulate(args, progress: bool) -> int:
    scheme = resolve_scheme(args.scheme)
    subset = parse_subset(args.set)
    print(f"📄 Esquema: {scheme.name}   B={list(subset)}")

    if args.protocol == 'qq':
        if args.trials < 1:
            print("❌ Error: --trials debe ser >= 1")
            return EXIT_USAGE
        summary = qq_trials(scheme, subset, args.trials, args.seed, progress=progress)
        print(format_qq_summary(summary))
        passed = summary.min_fidelity >= QQ_FIDELITY_FLOOR
        simulation = summary.model_dump(mode='json')
        config = {'trials': args.trials, 'seed': args.seed}
        debug_text = round_log_text = None
    else:
        noise = NoiseModel.parse(args.noise)
        config_model = SessionConfig(
            rounds=args.rounds,
            seed=args.seed,
            noise=noise,
            abort_qber=args.abort_qber,
            test_fraction=args.test_fraction,
            pa_output_rate=args.pa_rate,
        )
        simulator = RCQSimulator(scheme, subset, noise)
        transcript = rcq_session(scheme, subset, config_model, progress, simulator)
        print(format_session(transcript))
        simulation = transcript.summary()
        if noise.kind != NoiseKind.NONE:
            simulation['exact_qber'] = simulator.exact_sifted_qber()
            print(f"   QBER exacto (oráculo): {simulation['exact_qber']:.4f}")
        passed = True
        config = config_model.model_dump(mode='json')
        round_log_text = transcript.round_log()
        debug_text = transcript.model_dump_json(indent=2)
        if args.round_log:
            atomic_write_text(args.round_log, round_log_text)
            print(f"📝 Registro de rondas: {args.round_log}")

    if args.debug:
        try:
            debug_dir = create_debug_directory(scheme.name)
            print(f"🐛 Modo debug: {debug_dir}")
            if round_log_text is not None:
                save_debug_file(round_log_text, 'rondas.log', debug_dir)
                save_debug_file(debug_text, 'transcripcion.json', debug_dir)
        except OSError as e:
            print(f"⚠️  Advertencia debug: {str(e)}")

    report = build_report(
        f'simulate {args.protocol}', scheme, config=config, simulation=simulation, passed=passed
    )
    out = args.out or f"simulacion_{args.protocol}_{scheme.name}.json"
    write_report(report, out)
    print(f"📝 Informe guardado en: {out}")
    return EXIT_OK if passed else EXIT_FAILURE


def main(argv: Optional[List[str]] = None) -> int:
    """
    Función principal del analizador.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    progress = settings.show_progress and not getattr(args, 'no_progress', False)
    try:
        if args.command == 'make':
            return cmd_make(args)
        if args.command == 'analyze':
            return cmd_analyze(args, progress)
        if args.command == 'simulate':
            return cmd_simulate(args, progress)
        sys.stdout.write(report_schema())
        return EXIT_OK
    except NotAuthorizedError as e:
        print(f"❌ {str(e)}")
        return EXIT_FAILURE
    except (QSSError, ValueError, FileNotFoundError) as e:
        print(f"❌ Error: {str(e)}")
        return EXIT_USAGE
    except OSError as e:
        print(f"❌ Error de archivo: {str(e)}")
        return EXIT_USAGE
    except KeyboardInterrupt:
        print("\n\n⚠️  Proceso interrumpido")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
