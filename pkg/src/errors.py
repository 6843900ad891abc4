class KnotObsError(Exception):
    """Base exception for every error raised by knotobs"""
    pass
