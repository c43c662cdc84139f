"""
Model file format

Reads and writes the textual model language: machines, templates with
``$param`` placeholders, template instances, systems and check lines.
Also exports machines and reachability graphs as DOT digraphs.
"""

import logging
import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import pydot
from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedInput, VisitError

from boolform import FormulaSyntaxError, TRUE, parse_formula, print_formula
from csm_core import Clg, Edge, Machine, ModelError, Node, System, make_system
from ctl import CtlSyntaxError, parse_ctl
from product import ReachabilityGraph, add_observer

logger = logging.getLogger(__name__)

MODEL_GRAMMAR = r'''
start: statement*

?statement: machine
    | template
    | instance
    | system
    | check

machine: "machine" NAME "{" item* "}"
template: "template" NAME "(" names ")" ["as" NAME] "{" item* "}"
instance: "instance" NAME "(" args ")" ";"
system: "system" NAME "{" system_item* "}"
check: "check" NAME [FAIR] STRING ["expect" VERDICT] ";"

?item: init
    | node
    | edge

init: "init" NAME ";"
node: "node" NAME "{" emit* "}"
emit: "emit" names ";"
edge: "edge" NAME "->" NAME "when" STRING ";"

?system_item: "use" names ";"       -> use
    | "env" names ";"               -> env
    | "observe" NAME ";"            -> observe

names: NAME ("," NAME)*
args: arg ("," arg)*
?arg: NAME
    | NUMBER

FAIR: "fair"
VERDICT: "TRUE" | "FALSE"
NAME: /(?:[A-Za-z_]|\$\{[A-Za-z_]\w*\}|\$[A-Za-z_])(?:\w|\$\{[A-Za-z_]\w*\}|\$[A-Za-z_])*/
NUMBER: /[0-9]+/
COMMENT: /#[^\n]*/

%import common.ESCAPED_STRING -> STRING
%import common.WS
%ignore WS
%ignore COMMENT
'''


class ModelSyntaxError(ValueError):
    """Raised for malformed model text, unresolved names and duplicate definitions."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        if line:
            message = f"{message} (line {line}, column {column})" if column else f"{message} (line {line})"
        super().__init__(message)
        self.line = line
        self.column = column


@dataclass(frozen=True)
class NodeDef:
    name: str
    outputs: Tuple[str, ...] = ()


@dataclass(frozen=True)
class EdgeDef:
    src: str
    dst: str
    guard: str
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class MachineBody:
    """Unresolved machine text: names and guards still as strings."""
    name: str
    initial: Optional[str]
    nodes: Tuple[NodeDef, ...]
    edges: Tuple[EdgeDef, ...]
    line: int = field(default=0, compare=False)

    def substitute(self, mapping: Dict[str, str], name: str) -> 'MachineBody':
        sub = _substituter(mapping)
        return MachineBody(
            name,
            sub(self.initial) if self.initial is not None else None,
            tuple(NodeDef(sub(n.name), tuple(sub(s) for s in n.outputs)) for n in self.nodes),
            tuple(EdgeDef(sub(e.src), sub(e.dst), sub(e.guard), e.line) for e in self.edges),
            self.line)

    def build(self) -> Machine:
        """Parse the guards and validate the result as a Machine."""
        if self.initial is None:
            raise ModelSyntaxError(f"Machine '{self.name}' has no init statement", self.line)
        edges = []
        for e in self.edges:
            try:
                guard = parse_formula(e.guard)
            except FormulaSyntaxError as ex:
                raise ModelSyntaxError(f"Machine '{self.name}', edge {e.src} -> {e.dst}: {ex}", e.line) from ex
            edges.append(Edge(e.src, e.dst, guard))
        nodes = tuple(Node(n.name, frozenset(n.outputs)) for n in self.nodes)
        return Machine(self.name, Clg(nodes, tuple(edges)), self.initial)


def _substituter(mapping: Dict[str, str]):
    if not mapping:
        return lambda text: text
    alternatives = '|'.join(re.escape(p) for p in sorted(mapping, key=len, reverse=True))
    pattern = re.compile(r'\$\{(' + alternatives + r')\}|\$(' + alternatives + r')')
    return lambda text: pattern.sub(lambda m: mapping[m.group(1) or m.group(2)], text)


@dataclass(frozen=True)
class Template:
    name: str
    params: Tuple[str, ...]
    pattern: Optional[str]
    body: MachineBody

    def instance_name(self, args: Sequence[str]) -> str:
        if self.pattern is not None:
            return _substituter(dict(zip(self.params, args)))(self.pattern)
        return '_'.join((self.name,) + tuple(args))


def instantiate(template: Template, args: Sequence[str]) -> Machine:
    """Replace every ``$param`` (or ``${param}``) in the template body by its argument.

    Raises:
        ModelError: On arity mismatch or when the substituted text is not a valid machine
    """
    args = tuple(str(a) for a in args)
    if len(args) != len(template.params):
        raise ModelError(f"Template '{template.name}' takes {len(template.params)} argument(s), "
                         f"got {len(args)}")
    name = template.instance_name(args)
    body = template.body.substitute(dict(zip(template.params, args)), name)
    try:
        return body.build()
    except ModelError as e:
        raise ModelError(f"Failed to instantiate {template.name}({', '.join(args)}): {str(e)}") from e


@dataclass(frozen=True)
class Instance:
    template: str
    args: Tuple[str, ...]


@dataclass(frozen=True)
class SystemDef:
    name: str
    uses: Tuple[str, ...]
    env: Optional[Tuple[str, ...]] = None
    observe: Optional[str] = None


@dataclass(frozen=True)
class CheckSpec:
    system: str
    formula: str
    fair: bool = False
    expect: Optional[bool] = None
    line: int = field(default=0, compare=False)


@dataclass
class ModelFile:
    templates: Dict[str, Template] = field(default_factory=dict)
    machines: Dict[str, Machine] = field(default_factory=dict)
    # machine name -> template instance it was generated from
    instances: Dict[str, Instance] = field(default_factory=dict)
    systems: Dict[str, SystemDef] = field(default_factory=dict)
    checks: List[CheckSpec] = field(default_factory=list)

    def machine(self, name: str) -> Machine:
        try:
            return self.machines[name]
        except KeyError:
            raise ModelError(f"Model has no machine '{name}'") from None

    def system(self, name: str) -> System:
        """Build the named system, with its observer appended last."""
        try:
            definition = self.systems[name]
        except KeyError:
            known = ', '.join(sorted(self.systems)) or 'none'
            raise ModelError(f"Model has no system '{name}' (known: {known})") from None
        system = make_system((self.machines[u] for u in definition.uses), definition.env)
        if definition.observe is not None:
            system = add_observer(system, self.machines[definition.observe])
        return system

    def default_system(self) -> str:
        if len(self.systems) != 1:
            raise ModelError("The model defines several systems; choose one with --system")
        return next(iter(self.systems))

    def with_checks(self, checks: Iterable[CheckSpec]) -> 'ModelFile':
        checks = list(checks)
        for c in checks:
            if c.system not in self.systems:
                raise ModelSyntaxError(f"check refers to unknown system '{c.system}'", c.line)
        return ModelFile(dict(self.templates), dict(self.machines), dict(self.instances),
                         dict(self.systems), self.checks + checks)


# ==================== Parsing ====================

def _unquote(token: Token) -> str:
    return token[1:-1].replace('\\"', '"').replace('\\\\', '\\')


@v_args(inline=True)
class _ModelTransformer(Transformer):
    def start(self, *statements):
        return list(statements)

    def names(self, *tokens):
        return tuple(tokens)

    def args(self, *tokens):
        return tuple(tokens)

    def init(self, name):
        return ('init', name)

    def emit(self, names):
        return names

    def node(self, name, *emits):
        outputs = []
        for group in emits:
            outputs.extend(str(s) for s in group)
        return NodeDef(str(name), tuple(outputs))

    def edge(self, src, dst, guard):
        return EdgeDef(str(src), str(dst), _unquote(guard), src.line)

    def machine(self, name, *items):
        return ('machine', _body(str(name), items, name.line), name)

    def template(self, name, params, pattern, *items):
        body = _body(str(pattern) if pattern is not None else str(name), items, name.line)
        return ('template', Template(str(name), tuple(str(p) for p in params),
                                     str(pattern) if pattern is not None else None, body), name)

    def instance(self, name, args):
        return ('instance', Instance(str(name), tuple(str(a) for a in args)), name)

    def use(self, names):
        return ('use', tuple(str(n) for n in names))

    def env(self, names):
        return ('env', tuple(str(n) for n in names))

    def observe(self, name):
        return ('observe', str(name))

    def system(self, name, *items):
        uses: List[str] = []
        env = None
        observe = None
        for kind, value in items:
            if kind == 'use':
                uses.extend(value)
            elif kind == 'env':
                env = (env or ()) + value
            elif observe is not None:
                raise ModelSyntaxError(f"System '{name}' has more than one observe statement", name.line)
            else:
                observe = value
        return ('system', SystemDef(str(name), tuple(uses), env, observe), name)

    def check(self, system, fair, formula, verdict):
        expect = None if verdict is None else str(verdict) == 'TRUE'
        return ('check', CheckSpec(str(system), _unquote(formula), fair is not None, expect, system.line), system)


def _body(name: str, items, line: int) -> MachineBody:
    initial = None
    nodes = []
    edges = []
    for item in items:
        if isinstance(item, NodeDef):
            nodes.append(item)
        elif isinstance(item, EdgeDef):
            edges.append(item)
        else:
            if initial is not None:
                raise ModelSyntaxError(f"Machine '{name}' has more than one init statement", line)
            initial = str(item[1])
    return MachineBody(name, initial, tuple(nodes), tuple(edges), line)


_MODEL_PARSER = Lark(MODEL_GRAMMAR, parser='lalr')
_TRANSFORMER = _ModelTransformer()


def _statements(text: str) -> list:
    try:
        tree = _MODEL_PARSER.parse(text)
    except UnexpectedInput as e:
        raise ModelSyntaxError("Invalid model text", e.line, e.column) from e
    try:
        return _TRANSFORMER.transform(tree)
    except VisitError as e:
        if isinstance(e.orig_exc, ModelSyntaxError):
            raise e.orig_exc from None
        raise


def parse_model(text: str, resolve_checks: bool = True) -> ModelFile:
    """Parse model text into a fully resolved ModelFile.

    Args:
        text: Model source
        resolve_checks: Require check lines to name systems of this file

    Returns:
        ModelFile with every template instance expanded into a machine

    Raises:
        ModelSyntaxError: Syntax errors, unresolved names, duplicate definitions
        ModelError: When a machine or template instance is ill-formed
    """
    model = ModelFile()
    for kind, value, token in _statements(text):
        line = token.line
        if kind == 'template':
            if value.name in model.templates:
                raise ModelSyntaxError(f"Duplicate template '{value.name}'", line)
            model.templates[value.name] = value
        elif kind == 'machine':
            machine = value.build()
            _add_machine(model, machine, line)
        elif kind == 'instance':
            template = model.templates.get(value.template)
            if template is None:
                raise ModelSyntaxError(f"Unknown template '{value.template}'", line)
            if len(value.args) != len(template.params):
                raise ModelSyntaxError(
                    f"Template '{template.name}' takes {len(template.params)} argument(s), "
                    f"got {len(value.args)}", line)
            machine = instantiate(template, value.args)
            _add_machine(model, machine, line)
            model.instances[machine.name] = value
        elif kind == 'system':
            if value.name in model.systems:
                raise ModelSyntaxError(f"Duplicate system '{value.name}'", line)
            for name in value.uses + ((value.observe,) if value.observe else ()):
                if name not in model.machines:
                    raise ModelSyntaxError(f"System '{value.name}' uses unknown machine '{name}'", line)
            model.systems[value.name] = value
        else:
            try:
                parse_ctl(value.formula)
            except CtlSyntaxError as e:
                raise ModelSyntaxError(f"check {value.system}: {e}", line) from e
            model.checks.append(value)
    if resolve_checks:
        for c in model.checks:
            if c.system not in model.systems:
                raise ModelSyntaxError(f"check refers to unknown system '{c.system}'", c.line)
    logger.debug("Parsed model: %d machine(s), %d template(s), %d system(s), %d check(s)",
                 len(model.machines), len(model.templates), len(model.systems), len(model.checks))
    return model


def _add_machine(model: ModelFile, machine: Machine, line: int) -> None:
    if machine.name in model.machines:
        raise ModelSyntaxError(f"Duplicate machine '{machine.name}'", line)
    model.machines[machine.name] = machine


def parse_checks(text: str) -> List[CheckSpec]:
    """Parse a file holding only check lines."""
    model = parse_model(text, resolve_checks=False)
    if model.machines or model.templates or model.systems:
        raise ModelSyntaxError("A checks file may contain only check statements")
    return model.checks


def load_model(path: str, checks_path: Optional[str] = None) -> ModelFile:
    """Read a model file, optionally merging a separate checks file."""
    with open(path, 'r', encoding='utf-8') as f:
        model = parse_model(f.read())
    if checks_path:
        with open(checks_path, 'r', encoding='utf-8') as f:
            model = model.with_checks(parse_checks(f.read()))
    return model


# ==================== Printing ====================

def _print_body(lines: List[str], initial: Optional[str], nodes: Iterable[Tuple[str, Sequence[str]]],
                edges: Iterable[Tuple[str, str, str]]) -> None:
    if initial is not None:
        lines.append(f"  init {initial};")
    for name, outputs in nodes:
        if outputs:
            lines.append(f"  node {name} {{ emit {', '.join(outputs)}; }}")
        else:
            lines.append(f"  node {name} {{}}")
    for src, dst, guard in edges:
        escaped = guard.replace('\\', '\\\\').replace('"', '\\"')
        lines.append(f"  edge {src} -> {dst} when \"{escaped}\";")


def print_machine(m: Machine) -> str:
    lines = [f"machine {m.name} {{"]
    _print_body(lines, m.initial,
                ((n.name, sorted(n.outputs)) for n in m.nodes),
                ((e.src, e.dst, print_formula(e.guard)) for e in m.edges))
    lines.append('}')
    return '\n'.join(lines)


def print_model(model: ModelFile) -> str:
    """Canonical text of a model; parsing it again yields an equal ModelFile."""
    blocks = []
    for t in model.templates.values():
        head = f"template {t.name}({', '.join(t.params)})"
        if t.pattern is not None:
            head += f" as {t.pattern}"
        lines = [head + ' {']
        _print_body(lines, t.body.initial, ((n.name, n.outputs) for n in t.body.nodes),
                    ((e.src, e.dst, e.guard) for e in t.body.edges))
        lines.append('}')
        blocks.append('\n'.join(lines))
    for name, m in model.machines.items():
        if name in model.instances:
            inst = model.instances[name]
            blocks.append(f"instance {inst.template}({', '.join(inst.args)});")
        else:
            blocks.append(print_machine(m))
    for s in model.systems.values():
        lines = [f"system {s.name} {{", f"  use {', '.join(s.uses)};"]
        if s.env is not None:
            lines.append(f"  env {', '.join(s.env)};")
        if s.observe is not None:
            lines.append(f"  observe {s.observe};")
        lines.append('}')
        blocks.append('\n'.join(lines))
    for c in model.checks:
        text = f"check {c.system}"
        if c.fair:
            text += ' fair'
        text += ' "' + c.formula.replace('\\', '\\\\').replace('"', '\\"') + '"'
        if c.expect is not None:
            text += ' expect ' + ('TRUE' if c.expect else 'FALSE')
        blocks.append(text + ';')
    return '\n\n'.join(blocks) + '\n'


# ==================== DOT export ====================

def export_dot(target: Union[Machine, ReachabilityGraph]) -> str:
    """DOT digraph of a machine or of a reachability graph.

    Machine nodes show their outputs and edges their guards; product nodes
    show the state vector and edges the residual environment condition.
    The initial node is double-circled.
    """
    if isinstance(target, Machine):
        return _machine_dot(target)
    return _graph_dot(target)


def _machine_dot(m: Machine) -> str:
    # positional ids, names only in labels
    graph = pydot.Dot(m.name, graph_type='digraph')
    for k, node in enumerate(m.nodes):
        label = node.name
        if node.outputs:
            label += '\\n{' + ', '.join(sorted(node.outputs)) + '}'
        shape = 'doublecircle' if node.name == m.initial else 'circle'
        graph.add_node(pydot.Node(f"n{k}", label=label, shape=shape))
    for e in m.edges:
        graph.add_edge(pydot.Edge(f"n{m.node_index[e.src]}", f"n{m.node_index[e.dst]}",
                                  label=print_formula(e.guard)))
    return graph.to_string()


def _graph_dot(rg: ReachabilityGraph) -> str:
    graph = pydot.Dot('product', graph_type='digraph')
    for i in range(len(rg.states)):
        shape = 'doublecircle' if i == rg.initial else 'box'
        graph.add_node(pydot.Node(f"s{i}", label=rg.describe(i), shape=shape))
    for e in rg.edges:
        attrs = {}
        if e.residual != TRUE:
            attrs['label'] = print_formula(e.residual)
        if e.choices is None:
            attrs['style'] = 'dashed'
        graph.add_edge(pydot.Edge(f"s{e.src}", f"s{e.dst}", **attrs))
    return graph.to_string()
