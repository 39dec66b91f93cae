"""Utils package for organizing utility functions and classes."""
