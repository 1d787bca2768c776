"""Static checks for performance smells in Unreal Engine XR projects."""

__version__ = "0.1.0"
