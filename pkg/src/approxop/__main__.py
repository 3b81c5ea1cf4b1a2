from approxop.cli import main

main()
