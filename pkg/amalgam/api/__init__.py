# amalgam/api/__init__.py
# Command-line handlers, one module per subcommand
