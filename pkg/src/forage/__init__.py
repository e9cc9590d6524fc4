"""Exploration and exploitation with separable attention in two-armed Poisson bandits."""
