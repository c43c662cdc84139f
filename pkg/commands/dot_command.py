"""DOT export sub-command."""

from modelfmt import export_dot, load_model
from product import build_product

from .common import add_cap_arguments, caps, report_invalid


class DotCommand:
    """Writes a machine or the product of a system as a DOT digraph."""

    name = 'dot'

    def __init__(self, subparsers):
        parser = subparsers.add_parser(self.name, help='export a machine or a product as DOT')
        parser.add_argument('file', help='model file (*.csm)')
        target = parser.add_mutually_exclusive_group(required=True)
        target.add_argument('--machine', help='machine to export')
        target.add_argument('--system', help='system whose product is exported')
        parser.add_argument('--out', metavar='PATH', help='output file (default: stdout)')
        add_cap_arguments(parser)
        parser.set_defaults(command=self)

    def run(self, args, out, err) -> int:
        model = load_model(args.file)
        if args.machine:
            text = export_dot(model.machine(args.machine))
        else:
            system = model.system(args.system)
            if report_invalid(args.system, system, err):
                return 1
            max_states, max_edges = caps(args)
            text = export_dot(build_product(system, max_states, max_edges))
        if args.out:
            with open(args.out, 'w', encoding='utf-8') as f:
                f.write(text)
            print(f"DOT written to {args.out}", file=err)
        else:
            print(text, file=out)
        return 0
