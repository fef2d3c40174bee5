"""
gradstream: predictive coding of momentum-SGD updates in master-worker training
"""
