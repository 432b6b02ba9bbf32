"""HTTP surface: routers mounted by psentscore.main."""
