"""torsionlab: a workbench for torsion/completion functors, Ext/Tor and
local (co)homology over effective principal ideal rings."""

__version__ = "0.1.0"
