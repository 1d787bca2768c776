#pragma once

#include "CoreMinimal.h"
#include "GameFramework/Actor.h"
#include "TargetWall.generated.h"

UCLASS()
class VRDEMO_API ATargetWall : public AActor
{
    GENERATED_BODY()

public:
    ATargetWall();

protected:
    virtual void BeginPlay() override;

    UPROPERTY(EditAnywhere)
    UStaticMesh* TargetMesh;

    UPROPERTY(EditAnywhere)
    int32 NumTargets = 8;

    UPROPERTY(EditAnywhere)
    float Spacing = 50.f;

    UPROPERTY()
    USceneComponent* Root;

    UPROPERTY()
    UInstancedStaticMeshComponent* Targets;
};
