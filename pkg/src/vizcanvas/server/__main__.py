from vizcanvas.server.cli import main

main()
