from gaussmem.main import main

main()
