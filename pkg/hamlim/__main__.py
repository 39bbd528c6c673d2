# hamlim/__main__.py
from hamlim.main import main

raise SystemExit(main())
