"""Environment γ: Scoped Name -> (Location, Type)"""

from typing import Dict, Optional, Tuple

from lang.errors import UnboundVariable
from memory.values import Location


class Env:
    """
    One scope of the environment, chained to its enclosing scope

    Entering a block creates a child; leaving it means going back to the saved
    parent object, so names declared inside go out of scope. Temporaries of
    private-branch tracking live in a reserved table that user names never reach.
    """

    def __init__(self, parent: Optional["Env"] = None):
        self.parent = parent
        self.vars: Dict[str, Tuple[Location, object]] = {}
        self.temps: Dict[str, Tuple[Location, object]] = {}
        self.summaries: Dict[str, object] = {}

    def child(self) -> "Env":
        return Env(self)

    def declare(self, name, loc, ty, summary=None):
        self.vars[name] = (Location(*loc), ty)
        if summary is not None:
            self.summaries[name] = summary

    def declare_temp(self, name, loc, ty):
        self.temps[name] = (Location(*loc), ty)

    def lookup(self, name) -> Tuple[Location, object]:
        env = self
        while env is not None:
            if name in env.vars:
                return env.vars[name]
            env = env.parent
        raise UnboundVariable(f"'{name}' is not declared")

    def lookup_temp(self, name) -> Tuple[Location, object]:
        env = self
        while env is not None:
            if name in env.temps:
                return env.temps[name]
            env = env.parent
        raise UnboundVariable(f"temporary '{name}' is not in scope")

    def type_of(self, name):
        return self.lookup(name)[1]

    def location_of(self, name) -> Location:
        return self.lookup(name)[0]

    def summary_of(self, name):
        env = self
        while env is not None:
            if name in env.summaries:
                return env.summaries[name]
            env = env.parent
        return None

    def has(self, name):
        try:
            self.lookup(name)
            return True
        except UnboundVariable:
            return False

    def depth(self):
        return 0 if self.parent is None else 1 + self.parent.depth()

    def bindings(self):
        """Visible user bindings, innermost first wins: {name: (loc, ty)}."""
        chain = []
        env = self
        while env is not None:
            chain.append(env)
            env = env.parent
        visible = {}
        for env in reversed(chain):
            visible.update(env.vars)
        return visible

    def temp_bindings(self):
        chain = []
        env = self
        while env is not None:
            chain.append(env)
            env = env.parent
        visible = {}
        for env in reversed(chain):
            visible.update(env.temps)
        return visible
