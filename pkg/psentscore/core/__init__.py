"""Settings, errors and logging setup."""
