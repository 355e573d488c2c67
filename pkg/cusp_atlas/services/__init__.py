# Verification harness and file exporters
