"""Run the inference service with uvicorn. Port comes from INFER_PORT."""

import os

import uvicorn

from .app import create_app


def main() -> None:
    port = int(os.environ.get("INFER_PORT", "8601"))
    uvicorn.run(create_app(), host="127.0.0.1", port=port)


if __name__ == "__main__":
    main()
