"""
Línea de comandos.
Uso: python app/cli.py <subcomando> --config <archivo.json> [--out <dir>] [--format csv|json] [--seed <n>]
"""
from dataclasses import replace
import argparse
import json
import sys
import os

import pandas as pd

# Agregar el directorio raíz al path
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import config
from core.errors import QRacahError, ConfigError, ValidationError
from app.run_config import load_run_config, parse_run_config, OUTPUT_FORMATS
from app.pipelines import PIPELINES

EXIT_OK = 0
EXIT_TOLERANCE = 1
EXIT_CONFIG = 2
EXIT_VALIDATION = 3

COLUMNS_HELP = """
Columnas emitidas por subcomando (más <subcomando>_checks: check, value, tol, status):
  validate   params: q, alpha, beta, gamma, delta, N, eps, regime
  couplings  couplings: n, J, mu, A, C
  spectrum   spectrum: k, omega, weight
  entropy    entropy: L, entropy | c_eigs: l, c_direct, c_heun
  heun       heun: index, eigenvalue
  verify     trials: trial, q, alpha, beta, gamma, delta, N, L, K
  bethe      states: state, lambda_ref, lambda_eigen2, max_defect, c_bethe
             roots: state, i, U_re, U_im, u_re, u_im, defect_re, defect_im
  table1     table1: n, tq_root, thermo, heun, published_tq, published_thermo,
             published_heun, dev_tq_heun, dev_thermo_heun
"""


def build_parser():
    """Parser con un subcomando por pipeline."""
    parser = argparse.ArgumentParser(
        prog='qracah',
        description='Entropía de entrelazamiento de cadenas de fermiones libres q-Racah.',
        epilog=COLUMNS_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    subparsers = parser.add_subparsers(dest='command', required=True)
    for name, pipeline in PIPELINES.items():
        sub = subparsers.add_parser(name, help=pipeline.__doc__.strip().splitlines()[0])
        sub.add_argument('--config', required=(name != 'table1'),
                         help='Archivo JSON de configuración')
        sub.add_argument('--out', default=None, help='Directorio de salida')
        sub.add_argument('--format', choices=OUTPUT_FORMATS, default=None, help='Formato de salida')
        sub.add_argument('--seed', type=int, default=None, help='Semilla de las pruebas al azar')
    return parser


def write_tables(result, command, out_dir, fmt):
    """
    Escribe cada tabla y la tabla de verificaciones en out_dir.

    Args:
        result (PipelineResult): Resultado del pipeline
        command (str): Subcomando (prefijo de los archivos)
        out_dir (str): Directorio de salida
        fmt (str): 'csv' o 'json'

    Returns:
        list: Rutas escritas
    """
    os.makedirs(out_dir, exist_ok=True)
    tables = dict(result.tables)
    tables['checks'] = result.checks if result.checks is not None else pd.DataFrame()
    written = []
    for name, df in tables.items():
        path = os.path.join(out_dir, f"{command}_{name}.{fmt}")
        if fmt == 'csv':
            df.to_csv(path, index=False, float_format=config.FLOAT_FORMAT)
        else:
            # repr de float: la menor cadena que reproduce el mismo double
            records = df.astype(object).where(df.notna(), None).to_dict('records')
            with open(path, 'w', encoding='utf-8') as f:
                json.dump(records, f, indent=2, ensure_ascii=False)
        written.append(path)
    return written


def resolve_config(args):
    """RunConfig desde --config (o el preset table1) con las opciones de línea de comandos aplicadas."""
    if args.config is None:
        cfg = parse_run_config({'preset': 'table1'})
    else:
        cfg = load_run_config(args.config)
    overrides = {}
    if args.out is not None:
        overrides['output_path'] = args.out
    if args.format is not None:
        overrides['output_format'] = args.format
    if args.seed is not None:
        if args.seed < 0:
            raise ConfigError("--seed debe ser no negativa")
        overrides['seed'] = args.seed
    return replace(cfg, **overrides) if overrides else cfg


def main(argv=None):
    """
    Ejecuta un subcomando.

    Returns:
        int: 0 si todas las verificaciones pasan, 1 por tolerancia o falla numérica,
        2 por error de configuración, 3 por parámetros inválidos
    """
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
    except ConfigError as e:
        print(f"❌ Error de configuración: {e}")
        return EXIT_CONFIG

    try:
        result = PIPELINES[args.command](cfg)
    except ValidationError as e:
        print(f"❌ Parámetros inválidos: {e}")
        return EXIT_VALIDATION
    except ConfigError as e:
        print(f"❌ Error de configuración: {e}")
        return EXIT_CONFIG
    except QRacahError as e:
        print(f"❌ {type(e).__name__}: {e}")
        return EXIT_TOLERANCE

    written = write_tables(result, args.command, cfg.output_path, cfg.output_format)
    print("-" * 70)
    for path in written:
        print(f"  📄 {path}")
    if result.ok:
        print("✅ Todas las verificaciones dentro de tolerancia")
        return EXIT_OK
    failed = int((result.checks['status'] == 'fail').sum())
    print(f"❌ {failed} verificaciones fuera de tolerancia")
    return EXIT_TOLERANCE


if __name__ == "__main__":
    sys.exit(main())
