# main.py
# Entry point for the amalgam command-line tool

from amalgam.main import main

if __name__ == "__main__":
    main()
