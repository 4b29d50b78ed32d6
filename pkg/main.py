import argparse as ap
import datetime
import sys
import typing as tp

import env
import jobs
import options.job_options as jo

JOB_OPTIONS = {
    'gen-demos': jo.GenDemosOptions,
    'train-ranking': jo.TrainRankingOptions,
    'train': jo.TrainOptions,
    'eval': jo.EvalOptions,
    'reward-grid': jo.RewardGridOptions,
}


def parse_seeds(seeds: tp.Optional[str]) -> tp.Optional[tp.List[int]]:
    if not seeds:
        return None
    return [int(seed) for seed in seeds.split(',') if seed.strip()]


def build_job_options(args: ap.Namespace) -> jo.JobOptions:
    kwargs = dict(config=args.config, preset=args.preset, seed=args.seed, seeds=parse_seeds(args.seeds),
                  out=args.out, opts=args.opts)
    if args.job == 'eval':
        kwargs.update(episodes=args.episodes, policy=args.policy)
    elif args.job == 'reward-grid':
        kwargs.update(resolution=args.resolution, snapshot=args.snapshot)

    return JOB_OPTIONS[args.job](**kwargs)


def build_parser() -> ap.ArgumentParser:
    parser = ap.ArgumentParser()
    parser.add_argument('job',
                        type=str,
                        help='The job to start.',
                        choices=list(JOB_OPTIONS))
    parser.add_argument('--config', type=str, default=None, help='JSON configuration file.')
    parser.add_argument('--preset', type=str, default=None, help='Named base configuration from specs.')
    parser.add_argument('--seed', type=int, default=None, help='Overrides the configured seed.')
    parser.add_argument('--seeds', type=str, default=None, help='Comma separated seeds, one process each.')
    parser.add_argument('--out', type=str, default=None, help='Output directory of the run.')
    parser.add_argument('-o', '--opts', required=False,
                        type=str,
                        help='Configuration overrides formatted as key1:value1,section.key2:value2',
                        default='')
    parser.add_argument('--episodes', type=int, default=None, help='eval: number of episodes.')
    parser.add_argument('--policy', type=str, default='agent', choices=['agent', 'expert'], help='eval: policy.')
    parser.add_argument('--resolution', type=int, default=101, help='reward-grid: lattice points per axis.')
    parser.add_argument('--snapshot', type=str, default='post', choices=['pre', 'post'],
                        help='reward-grid: discriminator before or after policy learning.')

    return parser


def main(argv: tp.Optional[tp.List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    start = datetime.datetime.now()
    env.LOGGER.info(f'START: {start}')
    try:
        jobs.run(args.job, build_job_options(args))
    except Exception as e:
        env.LOGGER.error(f'ERROR: {type(e).__name__}: {e}')
        return 1

    end = datetime.datetime.now()
    env.LOGGER.info(f'END: {end}. Run time: {end - start}')

    return 0


if __name__ == '__main__':
    """Main entry point of application."""
    sys.exit(main())
