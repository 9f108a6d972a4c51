"""A pretend trainer speaking the JSON line protocol.

It reads one request per line and answers with a fitness that depends on the
config; a real trainer would fit a network here and reply with its negative
test accuracy.
"""

import json
import math
import sys

for line in sys.stdin:
    msg = json.loads(line)
    if msg.get("cmd") == "shutdown":
        break
    cfg = msg["config"]
    width = sum(layer["neurons"] for layer in cfg["layers"])
    score = 0.9 + 0.05 * math.exp(-((math.log2(width) - 9.5) ** 2)) \
        - 0.01 * abs(math.log10(cfg["learning_rate"]) + 3)
    print(json.dumps({"id": msg["id"], "fitness": -score}), flush=True)
