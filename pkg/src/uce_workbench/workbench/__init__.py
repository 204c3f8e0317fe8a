"""Tool surface: algebra file format, built-in corpus, verification suite,
HTTP service and command line client."""
