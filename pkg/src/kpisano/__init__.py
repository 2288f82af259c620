"""Pisano periods of K-Fibonacci and binary recurrence sequences, their fixed
points, and trajectories under the iterated period map."""

__version__ = "0.1.0"
