from proj_inference.cli import main


raise SystemExit(main())
