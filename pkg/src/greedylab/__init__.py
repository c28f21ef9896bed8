"""
greedylab: a desk-scale laboratory for the thresholding greedy algorithm.

Evaluates quasi-norms of sequence spaces, runs the greedy machinery over
finitely supported vectors, estimates basis constants by witness-certified
search and checks the inequality chains relating them.
"""

__version__ = "0.1.0"
