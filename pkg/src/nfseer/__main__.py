from nfseer.cli import main

main()
