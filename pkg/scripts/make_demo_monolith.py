#!/usr/bin/env python3
"""Build a small deterministic demo monolith: a git repository plus access traces.

The repository has five domain entities, three authors, one rename and one
pair of commits close enough to bundle, so every pipeline stage has something
to chew on.  All commit dates are pinned, so rebuilding gives identical output.
"""

import argparse
import json
import os
import shutil
import subprocess
import sys
from pathlib import Path

EPOCH = 1609502400  # 2021-01-01T12:00:00Z

ALICE = ("Alice Dev", "alice@example.com")
BOB = ("Bob Dev", "bob@example.com")
CAROL = ("Carol Dev", "carol@example.com")

ACCESSES = {
    "browseCatalog": [["Catalog", "R"], ["Catalog", "R"]],
    "placeOrder": [["User", "R"], ["Catalog", "R"], ["Order", "W"], ["Payment", "W"]],
    "payInvoice": [["Payment", "R"], ["Payment", "W"], ["Order", "R"]],
    "trackShipment": [["Shipment", "R"], ["Order", "R"]],
    "updateProfile": [["User", "R"], ["User", "W"]],
    "restock": [["Catalog", "W"], ["Shipment", "R"]],
}


def _env(author, when):
    name, email = author
    stamp = f"{when} +0000"
    env = os.environ.copy()
    env.update(
        GIT_AUTHOR_NAME=name,
        GIT_AUTHOR_EMAIL=email,
        GIT_COMMITTER_NAME=name,
        GIT_COMMITTER_EMAIL=email,
        GIT_AUTHOR_DATE=stamp,
        GIT_COMMITTER_DATE=stamp,
    )
    return env


def _git(repo, args, env=None):
    subprocess.run(["git", "-C", str(repo), *args], check=True, capture_output=True, env=env)


def _write(repo, relpath, text):
    path = repo / relpath
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _commit(repo, author, when, message):
    _git(repo, ["add", "-A"], env=_env(author, when))
    _git(repo, ["commit", "-qm", message], env=_env(author, when))


def build(dest: Path, force: bool = False) -> Path:
    if dest.exists():
        if not force:
            raise SystemExit(f"{dest} already exists (use --force to rebuild)")
        shutil.rmtree(dest)
    repo = dest / "repo"
    repo.mkdir(parents=True)
    _git(repo, ["-c", "init.defaultBranch=main", "init", "-q"])

    _write(repo, "src/Catalog.java", "class Catalog { }\n")
    _write(repo, "src/Order.java", "class Order { }\n")
    _write(repo, "README.md", "demo shop monolith\n")
    _commit(repo, ALICE, EPOCH, "initial catalog and orders")

    # 30 minutes later, same author: bundles with the initial commit
    _write(repo, "src/User.java", "class User { }\n")
    _write(repo, "src/Order.java", "class Order { User buyer; }\n")
    _commit(repo, ALICE, EPOCH + 1800, "user accounts")

    _write(repo, "src/Payment.java", "class Payment { }\n")
    _write(repo, "src/Order.java", "class Order { User buyer; Payment payment; }\n")
    _commit(repo, BOB, EPOCH + 90_000, "payment records")

    _write(repo, "src/Shipment.java", "class Shipment { }\n")
    _write(repo, "src/Catalog.java", "class Catalog { int stock; }\n")
    _commit(repo, CAROL, EPOCH + 180_000, "shipments and stock levels")

    (repo / "src/billing").mkdir()
    _git(repo, ["mv", "src/Payment.java", "src/billing/Payment.java"])
    _commit(repo, BOB, EPOCH + 270_000, "move payments into billing")

    _write(repo, "src/Catalog.java", "class Catalog { int stock; String name; }\n")
    _write(repo, "src/User.java", "class User { String name; }\n")
    _commit(repo, ALICE, EPOCH + 360_000, "naming cleanup")

    _write(repo, "src/Shipment.java", "class Shipment { Order order; }\n")
    _write(repo, "src/Order.java", "class Order { User buyer; Payment payment; int id; }\n")
    _commit(repo, CAROL, EPOCH + 450_000, "link shipments to orders")

    _write(repo, "src/billing/Payment.java", "class Payment { int cents; }\n")
    _write(repo, "src/User.java", "class User { String name; int logins; }\n")
    _commit(repo, BOB, EPOCH + 540_000, "payment amounts and login counts")

    accesses = dest / "accesses.json"
    accesses.write_text(json.dumps(ACCESSES, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return dest


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--dest",
        default="demo_monolith",
        help="directory to create (default ./demo_monolith)",
    )
    parser.add_argument("--force", action="store_true", help="replace an existing directory")
    args = parser.parse_args(argv)
    dest = build(Path(args.dest), force=args.force)
    print(f"demo monolith ready: repository {dest / 'repo'}, traces {dest / 'accesses.json'}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
