"""
GCN Lab

Semi-supervised node classification with Graph Convolutional Networks,
confidence-based GCNs and their enhanced variants, built on a small
numpy autodiff core.
"""

__version__ = "0.1.0"
