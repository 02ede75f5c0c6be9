"""Named, splittable random streams.

Every consumer derives its own ``random.Random`` from the run seed plus a
path of names, so adding draws in one place never shifts another's sequence.
String seeding hashes with SHA-512, which is stable across platforms and
Python versions.
"""

import random


def stream(seed, *names):
    path = "/".join(str(n) for n in names)
    return random.Random(f"rigidweb:{int(seed)}:{path}")
