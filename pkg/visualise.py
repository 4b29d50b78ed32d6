import argparse as ap

import env
import helpers as hp
import postpro.visualisers.visualiser_grid as vg


def main(args):
    opts = hp.load_config(args.config, args.preset, args.opts, args.seed, args.out)
    viz = vg.GridVisualiser(opts)
    for snapshot in ('pre', 'post'):
        if (viz.run_dir / vg.GRID_FILES[snapshot]).exists():
            viz.plot_components(snapshot, overlay=not args.no_overlay)
    if all((viz.run_dir / name).exists() for name in vg.GRID_FILES.values()):
        viz.plot_before_after('reward', overlay=not args.no_overlay)
        viz.plot_before_after('p_rf', overlay=not args.no_overlay)
    viz.plot_curve()
    env.LOGGER.info(f'Figures written to {viz.run_viz_dir}.')


if __name__ == '__main__':
    """Render reward landscapes and the learning curve of a finished run."""
    parser = ap.ArgumentParser()
    parser.add_argument('--config', type=str, default=None)
    parser.add_argument('--preset', type=str, default=None)
    parser.add_argument('--seed', type=int, default=None)
    parser.add_argument('--out', type=str, default=None)
    parser.add_argument('-o', '--opts', type=str, default='')
    parser.add_argument('--no-overlay', action='store_true')
    main(parser.parse_args())
