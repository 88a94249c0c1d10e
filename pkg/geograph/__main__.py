from geograph.cli import main

raise SystemExit(main())
