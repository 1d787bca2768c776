"""Synthetic project trees for throughput runs."""

from __future__ import annotations

import os
import random

_INI_TEMPLATE = """[/Script/Engine.Engine]
bSmoothFrameRate={smooth}
MinDesiredFrameRate={fps}.000000

[/Script/Engine.RendererSettings]
vr.InstancedStereo={stereo}
vr.MobileMultiView=True
r.SeparateTranslucency=False
r.AllowOcclusionQueries={occlusion}
r.ForwardShading=True
{padding}
"""

_CPP_HEAD = """#include "Actor{index}.h"
#include "Components/StaticMeshComponent.h"

AActor{index}::AActor{index}()
{{
    Hand = CreateDefaultSubobject<UMotionControllerComponent>(TEXT("Hand"));
{fix}    Root = CreateDefaultSubobject<USceneComponent>(TEXT("Root"));
}}
"""

_CPP_FUNC = """
void AActor{index}::Step{n}(float DeltaTime)
{{
    // update {n}: keep the per-frame work small
    float Total = 0.f;
    for (int32 i = 0; i < Items.Num(); ++i)
    {{
        Total += Items[i] * DeltaTime;
    }}
    if (Total > Threshold{n})
    {{
        UE_LOG(LogTemp, Verbose, TEXT("threshold {n} reached: %f"), Total);
    }}
    Last{n} = Total;
}}
"""


def write_tree(root: str, n_cpp: int = 500, n_ini: int = 470, cpp_lines: int = 200, seed: int = 0) -> None:
    """Write ``n_cpp`` sources of about ``cpp_lines`` lines and ``n_ini``
    settings files under ``root``, some of them smelly."""
    rng = random.Random(seed)
    for k in range(n_ini):
        # one DefaultEngine.ini per module folder, the rest uniquely named
        folder = os.path.join(root, f"Module{k % 37:02d}", "Config")
        os.makedirs(folder, exist_ok=True)
        name = "DefaultEngine.ini" if k < 37 else f"Default{k}.ini"
        padding = "\n".join(f"r.Setting{j}={rng.randint(0, 9)}" for j in range(40))
        with open(os.path.join(folder, name), "w") as fh:
            fh.write(_INI_TEMPLATE.format(
                smooth=rng.choice(["True", "False"]), fps=rng.choice([60, 90, 120]),
                stereo=rng.choice(["True", "False"]), occlusion=rng.choice(["True", "False"]),
                padding=padding,
            ))
    for k in range(n_cpp):
        folder = os.path.join(root, f"Module{k % 37:02d}", "Source")
        os.makedirs(folder, exist_ok=True)
        fix = "    Hand->bDisableLowLatencyUpdate = true;\n" if rng.random() < 0.5 else ""
        parts = [_CPP_HEAD.format(index=k, fix=fix)]
        n = 0
        while sum(p.count("\n") for p in parts) < cpp_lines:
            parts.append(_CPP_FUNC.format(index=k, n=n))
            n += 1
        with open(os.path.join(folder, f"Actor{k}.cpp"), "w") as fh:
            fh.write("".join(parts))
