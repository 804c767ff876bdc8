# Latin-square morphisms: fixed points, overlap detection, verification harness.
