from troprec.src.cli import main


raise SystemExit(main())
