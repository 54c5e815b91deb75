"""Strict twin-width, grid number, group actions, random constructions and queue layouts."""
