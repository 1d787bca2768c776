#include "N_TwoMeshes.h"

ADoor::ADoor()
{
    Frame = CreateDefaultSubobject<UStaticMeshComponent>(TEXT("Frame"));
    Panel = CreateDefaultSubobject<UStaticMeshComponent>(TEXT("Panel"));
    Panel->SetupAttachment(Frame);
}
