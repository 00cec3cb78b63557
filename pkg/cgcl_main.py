import argparse
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor, as_completed

from tqdm import tqdm

from cgcluster.algebra.exactla import SampleConfig
from cgcluster.cluster.quiver import VARIANTS, build_qcg
from cgcluster.cluster.seeds import script_to_json
from cgcluster.cluster.seq_s import gen_seq_S, verify_transform1
from cgcluster.cluster.seq_t import gen_seq_T, stage_mutation_counts, verify_transform2
from cgcluster.utils.config_loader import DEFAULT_MAIN_CONFIG, ConfigLoader
from cgcluster.utils.errors import CGClusterError, DomainError, UnsupportedError
from cgcluster.utils.json_encoder import dumps
from cgcluster.utils.logger import get_logger, progress_disabled, setup_logging
from cgcluster.verify import (
    VerificationReport,
    casimir_and_rank,
    check_antipoisson,
    check_block_traces,
    check_compat,
    check_diagonal_calculus,
    check_dj_samples,
    check_double_logcanon,
    check_extra_variables,
    check_layouts,
    check_regularity,
    check_semi_invariance,
    check_toric,
    exit_code,
    numeric_omega,
    render_table,
    reports_to_json,
)
from cgcluster.verify.checks import dump_omega
from cgcluster.verify.report import summary_frame

logger = get_logger('main')

VERBS = ('quiver', 'compat', 'omega', 'regularity', 'identities', 'rank', 'seq', 'report')


def n_arg(text):
    """An integer or an inclusive range a..b."""
    lo, sep, hi = text.partition('..')
    try:
        values = list(range(int(lo), int(hi) + 1)) if sep else [int(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f'expected an integer or a range a..b, got {text!r}')
    if not values:
        raise argparse.ArgumentTypeError(f'empty range {text!r}')
    return values


def parse_args(argv=None):
    parser = argparse.ArgumentParser(description='Cremmer-Gervais cluster structure checks')
    parser.add_argument('verb', choices=VERBS, help='what to run')

    #===problem===
    parser.add_argument('--n', type=n_arg, nargs='+', default=None, help='matrix size; several or a range a..b for report')
    parser.add_argument('--variant', type=str, choices=VARIANTS, default='matn', help='quiver variant')
    parser.add_argument('--which', type=str, choices=['S', 'T'], default='S', help='mutation sequence')
    parser.add_argument('--verify', action='store_true', help='run the sequence on sampled points and check it')

    #===sampling===
    parser.add_argument('--seed', type=int, default=None, help='rng seed (default: CGCL_SEED, then config)')
    parser.add_argument('--points', type=int, default=None, help='number of base points')
    parser.add_argument('--bound', type=int, default=None, help='entry bound of sampled matrices')

    #===output===
    parser.add_argument('--format', type=str, choices=['json', 'dot'], default='json', help='output format')
    parser.add_argument('--out', type=str, default=None, help='output file (default: stdout)')
    parser.add_argument('--config', type=str, default=DEFAULT_MAIN_CONFIG, help='main config file')
    parser.add_argument('--quiet', action='store_true', help='only log warnings')

    args = parser.parse_args(argv)
    if args.n is not None:
        args.n = [n for chunk in args.n for n in chunk]
    if args.verb != 'report' and args.n is not None and len(args.n) > 1:
        parser.error(f'{args.verb} takes a single --n')
    if args.format == 'dot' and args.verb != 'quiver':
        parser.error('--format dot is only available for quiver')
    return args


def sample_config(args, loader):
    return SampleConfig.from_config(loader.sampling, rng_seed=args.seed, entry_bound=args.bound, num_points=args.points)


def write(text, out=None):
    if out is None:
        sys.stdout.write(text if text.endswith('\n') else text + '\n')
        return
    with open(out, 'w') as f:
        f.write(text if text.endswith('\n') else text + '\n')


# ------------------------------------------------------------------ verbs
def run_quiver(args, n, cfg, loader):
    Q = build_qcg(n, args.variant)
    write(Q.to_dot() if args.format == 'dot' else dumps(Q.to_dict()), args.out)
    return 0


def run_omega(args, n, cfg, loader):
    omega = numeric_omega(n, cfg, args.variant)
    write(dumps(dump_omega(omega), indent=loader.report.indent), args.out)
    return 0


def run_seq(args, n, cfg, loader):
    generate = gen_seq_S if args.which == 'S' else gen_seq_T
    if not args.verify:
        seq = generate(n)
        if args.which == 'T':
            logger.info('stage mutation counts: %s', stage_mutation_counts(seq))
        write(script_to_json(seq.script, indent=loader.report.indent), args.out)
        return 0
    verify = verify_transform1 if args.which == 'S' else verify_transform2
    report = verify(n, cfg, loader.sampling.max_resamples, show_progress=not progress_disabled())
    return emit([report], args, loader)


CHECKS = {
    'compat': lambda n, cfg: [check_compat(n, cfg)],
    'regularity': lambda n, cfg: [check_regularity(n, cfg), check_extra_variables(n, cfg)],
    'identities': lambda n, cfg: [check_dj_samples(n, cfg), check_block_traces(n, cfg), check_layouts(n, cfg)],
    'rank': lambda n, cfg: [casimir_and_rank(n, cfg), check_antipoisson(n, cfg)],
    'double': lambda n, cfg: [check_double_logcanon(n, cfg), check_semi_invariance(n, cfg)],
    'toric': lambda n, cfg: [check_toric(n, cfg, numeric_omega(n, cfg) if n >= 3 else None)],
    'seq_S': lambda n, cfg: [verify_transform1(n, cfg)],
    'seq_T': lambda n, cfg: [verify_transform2(n, cfg)],
}

# checks that do not depend on n run once per invocation
ONCE = {
    'identities': lambda cfg: [check_diagonal_calculus()],
}


def run_check(name, n, cfg):
    """Reports of one named check; unsupported cases become unsupported reports."""
    return _guarded(name, n, cfg, lambda: CHECKS[name](n, cfg))


def run_once(name, cfg):
    if name not in ONCE:
        return []
    return _guarded(name, 0, cfg, lambda: ONCE[name](cfg))


def _guarded(name, n, cfg, build):
    try:
        return build()
    except UnsupportedError as exc:
        return [VerificationReport(name, n, cfg.rng_seed).unsupported(str(exc))]
    except CGClusterError as exc:
        logger.error('%s at n=%d raised %s', name, n, exc)
        return [VerificationReport(name, n, cfg.rng_seed).fail(type(exc).__name__, error=str(exc))]


def run_report(args, loader, cfg):
    section = loader.report
    n_values = args.n or section.n_values
    names = section.checks or list(CHECKS)
    jobs = [(name, n) for name in names for n in n_values]
    reports = []
    with ThreadPoolExecutor(max_workers=max(1, section.workers)) as pool:
        futures = [pool.submit(run_check, name, n, cfg) for name, n in jobs]
        futures += [pool.submit(run_once, name, cfg) for name in names if name in ONCE]
        for future in tqdm(as_completed(futures), total=len(futures), desc='report', disable=progress_disabled()):
            reports.extend(future.result())
    code = emit(reports, args, loader)
    if args.out is not None:
        summary_frame(reports).to_csv(os.path.splitext(args.out)[0] + '.csv', index=False)
    return code


def emit(reports, args, loader):
    indent = loader.report.indent
    if len(reports) == 1:
        write(reports[0].to_json(indent=indent), args.out)
    else:
        write(reports_to_json(reports, indent=indent), args.out)
    render_table(reports)
    return exit_code(reports)


def main(argv=None):
    args = parse_args(argv)
    setup_logging(logging.WARNING if args.quiet else logging.INFO)
    loader = ConfigLoader(args.config)
    cfg = sample_config(args, loader)
    if args.verb == 'report':
        return run_report(args, loader, cfg)
    n = args.n[0] if args.n else 3
    try:
        if args.verb == 'quiver':
            return run_quiver(args, n, cfg, loader)
        if args.verb == 'omega':
            return run_omega(args, n, cfg, loader)
        if args.verb == 'seq':
            return run_seq(args, n, cfg, loader)
        return emit(run_once(args.verb, cfg) + run_check(args.verb, n, cfg), args, loader)
    except (UnsupportedError, DomainError) as exc:
        logger.error('%s', exc)
        return 2
    except CGClusterError as exc:
        logger.error('%s failed: %s', args.verb, exc)
        return 1


if __name__ == '__main__':
    sys.exit(main())
