import argparse as ap
import dataclasses as dc
import json
import os
import pathlib as pl
import tempfile
import typing as tp

import dacite as da
import pandas as pd

import constants as ct
import errors as er
import options.experiment_options as eo
import options.job_options as jo
import specs


def atomic_write_text(path: tp.Union[pl.Path, str], text: str) -> pl.Path:
    """Write to a sibling temp file, then rename over the target."""
    path = pl.Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=str(path.parent), prefix=f'.{path.name}.', suffix='.tmp')
    try:
        with os.fdopen(fd, 'w', encoding='utf-8', newline='\n') as file:
            file.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise

    return path


def write_json(path: tp.Union[pl.Path, str], data: tp.Any) -> pl.Path:
    return atomic_write_text(path, json.dumps(data, indent=True) + '\n')


def read_json(path: tp.Union[pl.Path, str]) -> tp.Any:
    with open(str(path), 'r', encoding='utf-8') as file:
        return json.load(file)


def write_frame(path: tp.Union[pl.Path, str], df: pd.DataFrame) -> pl.Path:
    return atomic_write_text(path, df.to_csv(index=False, float_format=ct.CSV_FLOAT_FORMAT, lineterminator='\n'))


def read_frame(path: tp.Union[pl.Path, str]) -> pd.DataFrame:
    return pd.read_csv(str(path))


def flatten_dict(nested_dict: tp.Dict[tp.Any, tp.Any], parent_key='', sep='.') -> tp.Dict[tp.Any, str]:
    items = []
    for k, v in nested_dict.items():
        new_key = parent_key + sep + k if parent_key else k
        if isinstance(v, dict):
            items.extend(flatten_dict(v, new_key, sep=sep).items())
        else:
            items.append((new_key, str(v)))
    return dict(items)


def path_to_string(nested_dict: tp.Dict[tp.Any, tp.Any]):
    for k, v in nested_dict.items():
        if isinstance(v, dict):
            path_to_string(nested_dict[k])
        elif isinstance(v, pl.Path):
            nested_dict[k] = str(v)


########################################################################################################################
# CONFIGURATION
########################################################################################################################
def _merge(base: tp.Dict[str, tp.Any], update: tp.Dict[str, tp.Any]) -> tp.Dict[str, tp.Any]:
    merged = dict(base)
    for key, value in update.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def _unwrap_optional(hint: tp.Any) -> tp.Tuple[tp.Any, bool]:
    if tp.get_origin(hint) is tp.Union:
        args = [arg for arg in tp.get_args(hint) if arg is not type(None)]
        if len(args) == 1:
            return args[0], True
    return hint, False


def _convert(key: str, value: str, hint: tp.Any) -> tp.Any:
    hint, optional = _unwrap_optional(hint)
    value = value.strip()
    if optional and value.lower() in ('none', 'null', ''):
        return None
    try:
        if hint is bool:
            return jo.str2bool(value)
        if tp.get_origin(hint) in (list, tp.List):
            (item_type,) = tp.get_args(hint)
            return [item_type(item) for item in value.split('-') if item]
        if hint in (int, float, str):
            return hint(value)
    except (ValueError, ap.ArgumentTypeError) as e:
        raise er.ConfigError(f'{key}: cannot parse {value!r} as {hint}. {e}')
    raise er.ConfigError(f'{key}: overrides are not supported for fields of type {hint}.')


def parse_overrides(opts: str, data_class: tp.Type = eo.ExperimentOptions) -> tp.Dict[str, tp.Any]:
    """Turn `a.b:value,c:value` into a nested dict typed after the dataclass tree.

    Lists are written with `-` separators, e.g. `ranking.net.hidden:128-128`.
    """
    parsed: tp.Dict[str, tp.Any] = {}
    for pair in filter(None, (elem.strip() for elem in opts.split(','))):
        if ':' not in pair:
            raise er.ConfigError(f'Override {pair!r} must be formatted as key:value.')
        key, value = pair.split(':', 1)
        key = key.strip()
        cls, cursor = data_class, parsed
        parts = key.split('.')
        for depth, part in enumerate(parts):
            hints = tp.get_type_hints(cls)
            if part not in hints:
                raise er.ConfigError(f'Unknown configuration key: {".".join(parts[:depth + 1])}.')
            if depth == len(parts) - 1:
                cursor[part] = _convert(key, value, hints[part])
            else:
                cls = hints[part]
                if not dc.is_dataclass(cls):
                    raise er.ConfigError(f'Configuration key {".".join(parts[:depth + 1])} has no sub-keys.')
                cursor = cursor.setdefault(part, {})

    return parsed


def parse_config(data: tp.Dict[str, tp.Any]) -> eo.ExperimentOptions:
    if not isinstance(data, dict):
        raise er.ConfigError(f'Configuration must be a JSON object. Received: {type(data).__name__}.')
    try:
        return da.from_dict(data_class=eo.ExperimentOptions, data=data, config=da.Config(cast=[float], strict=True))
    except da.DaciteError as e:
        raise er.ConfigError(f'Invalid configuration: {e}')


def config_to_dict(config: eo.ExperimentOptions) -> tp.Dict[str, tp.Any]:
    return dc.asdict(config)


def read_config_file(path: tp.Union[pl.Path, str]) -> tp.Dict[str, tp.Any]:
    path = pl.Path(path)
    if not path.exists():
        raise er.ConfigError(f'Configuration file does not exist: {path}.')
    text = path.read_text(encoding='utf-8')
    if not text.strip():
        return {}
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise er.ConfigError(f'{path}: malformed JSON at line {e.lineno}: {e.msg}.')


def load_config(path: tp.Optional[tp.Union[pl.Path, str]] = None,
                preset: tp.Optional[str] = None,
                opts: str = '',
                seed: tp.Optional[int] = None,
                out: tp.Optional[str] = None) -> eo.ExperimentOptions:
    """Layer preset, config file, `--opts` overrides, then `--seed`/`--out`, and validate the result."""
    data: tp.Dict[str, tp.Any] = {}
    if preset is not None:
        if preset not in specs.experiments.PRESETS:
            raise er.ConfigError(f'Unknown preset: {preset}. Available: {sorted(specs.experiments.PRESETS)}.')
        data = config_to_dict(specs.experiments.PRESETS[preset])
    if path is not None:
        data = _merge(data, read_config_file(path))
    data = _merge(data, parse_overrides(opts))
    if seed is not None:
        data['seed'] = seed
    if out is not None:
        data['out'] = str(out)

    return parse_config(data)


def run_dir(config: eo.ExperimentOptions) -> pl.Path:
    if config.out is not None:
        return pl.Path(config.out)
    return ct.WORK_ROOT / ct.RUNS_ROOT / f'seed_{config.seed}'


def demos_path(config: eo.ExperimentOptions) -> pl.Path:
    if config.demos.path is not None:
        return pl.Path(config.demos.path)
    return run_dir(config) / ct.DEMOS_FILE
