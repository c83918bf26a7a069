"""Edge-disjoint path routing in expanders via hypergraph perfect matching
under strong Haxell conditions."""

__version__ = "0.1.0"
