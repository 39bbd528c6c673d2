# hamlim/services/__init__.py
# Service-layer modules: linear algebra, norms, instance generators, graph
# decompositions, stochastic bounds and end-to-end experiments.
