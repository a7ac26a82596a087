#!/usr/bin/env python3
"""Launch the HTTP service. Equivalent to `vizcanvas-server`.

Example:
    python scripts/serve.py --data-dir ./vizcanvas-data --listen 127.0.0.1:8600
"""

from vizcanvas.server.cli import main

if __name__ == "__main__":
    main()
