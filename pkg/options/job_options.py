import argparse as ap
import dataclasses as dc
import typing as t


def str2bool(v: str) -> bool:
    if isinstance(v, bool):
        return v
    if v.lower() in ('yes', 'true', 't', 'y', '1'):
        return True
    elif v.lower() in ('no', 'false', 'f', 'n', '0', ""):
        return False
    else:
        raise ap.ArgumentTypeError('Boolean value expected.')


@dc.dataclass
class JobOptions:
    """Flags shared by every subcommand; `opts` holds dotted `key:value` overrides."""
    config: t.Optional[str] = None
    preset: t.Optional[str] = None
    seed: t.Optional[int] = None
    seeds: t.Optional[t.List[int]] = None
    out: t.Optional[str] = None
    opts: str = ''


@dc.dataclass
class GenDemosOptions(JobOptions):
    pass


@dc.dataclass
class TrainRankingOptions(JobOptions):
    pass


@dc.dataclass
class TrainOptions(JobOptions):
    pass


@dc.dataclass
class EvalOptions(JobOptions):
    episodes: t.Optional[int] = None
    policy: str = 'agent'


@dc.dataclass
class RewardGridOptions(JobOptions):
    resolution: int = 101
    snapshot: str = 'post'
