"""Hasse Surface Workbench"""
