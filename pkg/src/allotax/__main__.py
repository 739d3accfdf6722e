# Copyright (c) 2025, Tom Ouellette
# Licensed under the MIT License

from .cli import run

if __name__ == "__main__":
    run()
