"""Product sub-command."""

import json
import logging

from modelfmt import export_dot, load_model
from plot import plot_exploration_profile
from product import build_product, stats

from .common import add_cap_arguments, caps, report_invalid, report_path

logger = logging.getLogger(__name__)


class ProductCommand:
    """Builds the reachability graph of one system and reports its size."""

    name = 'product'

    def __init__(self, subparsers):
        parser = subparsers.add_parser(self.name, help='build the product of a system')
        parser.add_argument('file', help='model file (*.csm)')
        parser.add_argument('--system', help='system to build (required if the file has several)')
        parser.add_argument('--stats', action='store_true', help='print state and edge counts')
        parser.add_argument('--dot', metavar='PATH', help='write the product as a DOT digraph')
        parser.add_argument('--plot', metavar='PATH', help='save the exploration profile chart')
        parser.add_argument('--json', metavar='PATH', help='write the statistics as JSON')
        add_cap_arguments(parser)
        parser.set_defaults(command=self)

    def run(self, args, out, err) -> int:
        model = load_model(args.file)
        name = args.system or model.default_system()
        system = model.system(name)
        if report_invalid(name, system, err):
            return 1

        max_states, max_edges = caps(args)
        rg = build_product(system, max_states, max_edges)
        counts = stats(rg)
        print(f"System {name}: {len(system.machines)} machines", file=out)
        if args.stats or not (args.dot or args.plot or args.json):
            for key, value in counts.items():
                print(f"  {key}: {value}", file=out)
            print(f"  layers: {len(rg.layers) - 1}", file=out)

        if args.dot:
            with open(report_path(args.dot), 'w', encoding='utf-8') as f:
                f.write(export_dot(rg))
            print(f"Product written to {args.dot}", file=err)
        if args.plot:
            success, message = plot_exploration_profile(rg, report_path(args.plot), f"Product of {name}")
            print(message, file=err)
            if not success:
                return 2
        if args.json:
            with open(report_path(args.json), 'w', encoding='utf-8') as f:
                json.dump({'system': name, **counts, 'layers': list(rg.layers)}, f, indent=2)
        return 0
