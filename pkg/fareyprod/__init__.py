# Farey product valuations, main terms and remainder terms
__version__ = "0.1.0"
