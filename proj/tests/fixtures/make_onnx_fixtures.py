# Copyright 2026 The percept-xai Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Builds ONNX fixtures for the encoder tests.

Writes into OUT_DIR:
  tiny.onnx, tiny.json   small conv net (32x32 input, D=16) plus sidecar
  tiny_inputs.bin        float32 N x 3 x 32 x 32 in [0, 1], before normalization
  tiny_expected.bin      float32 N x 16, torch outputs for those inputs
With --resnet50 also resnet50.onnx / resnet50.json (random weights, D=2048).
"""

import argparse
import json
import pathlib
import sys

try:
    import onnx
    import torch
except ImportError as e:
    # The C++ tests skip when the fixtures are absent.
    print(f"skipping ONNX fixtures: {e}")
    sys.exit(0)

TINY_SIZE = 32
TINY_DIM = 16
NUM_INPUTS = 8
IMAGENET_MEAN = [0.485, 0.456, 0.406]
IMAGENET_STD = [0.229, 0.224, 0.225]


class Tiny(torch.nn.Module):
    def __init__(self):
        super().__init__()
        self.body = torch.nn.Sequential(
            torch.nn.Conv2d(3, 8, 3, padding=1),
            torch.nn.BatchNorm2d(8),
            torch.nn.ReLU(),
            torch.nn.MaxPool2d(2),
            torch.nn.Conv2d(8, TINY_DIM, 3, padding=1),
            torch.nn.ReLU(),
            torch.nn.AdaptiveAvgPool2d(1),
            torch.nn.Flatten(),
        )

    def forward(self, x):
        return self.body(x)


def inline_identity_initializers(path):
    # Older OpenCV importers reject Identity nodes fed by initializers.
    model = onnx.load(path)
    graph = model.graph
    inits = {i.name: i for i in graph.initializer}
    keep = []
    for node in graph.node:
        if node.op_type == "Identity" and node.input[0] in inits:
            t = onnx.TensorProto()
            t.CopyFrom(inits[node.input[0]])
            t.name = node.output[0]
            graph.initializer.append(t)
        else:
            keep.append(node)
    del graph.node[:]
    graph.node.extend(keep)
    onnx.checker.check_model(model)
    onnx.save(model, path)


def export(model, size, path):
    model.eval()
    x = torch.zeros(1, 3, size, size)
    torch.onnx.export(
        model, x, str(path),
        input_names=["input"], output_names=["embedding"],
        dynamic_axes={"input": {0: "batch"}, "embedding": {0: "batch"}},
        opset_version=13, dynamo=False)
    inline_identity_initializers(str(path))


def sidecar(name, size, dim, model_file, path):
    path.write_text(json.dumps({
        "format_version": 1,
        "model_name": name,
        "model_file": model_file,
        "input_size": {"height": size, "width": size},
        "normalization": {"mean": IMAGENET_MEAN, "std": IMAGENET_STD},
        "embedding_dim": dim,
    }, indent=2))


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("out_dir", type=pathlib.Path)
    parser.add_argument("--resnet50", action="store_true")
    args = parser.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)
    torch.manual_seed(0)

    tiny = Tiny()
    # Non-trivial batch-norm statistics so the folded weights matter.
    with torch.no_grad():
        tiny.body[1].running_mean.uniform_(-0.2, 0.2)
        tiny.body[1].running_var.uniform_(0.5, 1.5)
    tiny.eval()
    export(tiny, TINY_SIZE, args.out_dir / "tiny.onnx")
    sidecar("tiny-convnet", TINY_SIZE, TINY_DIM, "tiny.onnx",
            args.out_dir / "tiny.json")

    gen = torch.Generator().manual_seed(1)
    raw = torch.rand(NUM_INPUTS, 3, TINY_SIZE, TINY_SIZE, generator=gen)
    mean = torch.tensor(IMAGENET_MEAN).view(1, 3, 1, 1)
    std = torch.tensor(IMAGENET_STD).view(1, 3, 1, 1)
    inputs = (raw - mean) / std
    with torch.no_grad():
        expected = tiny(inputs)
    raw.numpy().astype("<f4").tofile(args.out_dir / "tiny_inputs.bin")
    expected.numpy().astype("<f4").tofile(args.out_dir / "tiny_expected.bin")

    if args.resnet50:
        import torchvision
        net = torchvision.models.resnet50(weights=None)
        net.fc = torch.nn.Identity()
        export(net, 224, args.out_dir / "resnet50.onnx")
        sidecar("resnet50-random", 224, 2048, "resnet50.onnx",
                args.out_dir / "resnet50.json")


if __name__ == "__main__":
    main()
