from django.db import models


class SweepRun(models.Model):
    """A stored lambda or alpha sweep and its grid"""
    KIND_LAMBDA = 'lambda'
    KIND_ALPHA = 'alpha'
    KIND_CHOICES = [
        (KIND_LAMBDA, 'Marked-fraction sweep'),
        (KIND_ALPHA, 'Oracle-phase sweep'),
    ]

    STATUS_PENDING = 'pending'
    STATUS_RUNNING = 'running'
    STATUS_DONE = 'done'
    STATUS_FAILED = 'failed'
    STATUS_CHOICES = [
        (STATUS_PENDING, 'Pending'),
        (STATUS_RUNNING, 'Running'),
        (STATUS_DONE, 'Done'),
        (STATUS_FAILED, 'Failed'),
    ]

    kind = models.CharField(max_length=10, choices=KIND_CHOICES)
    alpha = models.FloatField(default=3.141592653589793, help_text="Oracle phase (rad) for lambda sweeps")
    lambda_value = models.FloatField(null=True, blank=True, help_text="Marked fraction for alpha sweeps")
    grid = models.JSONField(default=list, help_text="Grid values in evaluation order")
    k_cap = models.IntegerField(null=True, blank=True, help_text="Largest query count tried by alpha sweeps")
    status = models.CharField(max_length=10, choices=STATUS_CHOICES, default=STATUS_PENDING)
    error = models.TextField(blank=True)
    created_at = models.DateTimeField(auto_now_add=True)
    finished_at = models.DateTimeField(null=True, blank=True)

    class Meta:
        ordering = ['-created_at']

    def __str__(self):
        if self.kind == self.KIND_ALPHA:
            return f"Alpha sweep at lambda={self.lambda_value:g} ({len(self.grid)} points)"
        return f"Lambda sweep at alpha={self.alpha:g} ({len(self.grid)} points)"


class SweepRow(models.Model):
    """One evaluated grid point of a SweepRun"""
    run = models.ForeignKey(SweepRun, on_delete=models.CASCADE, related_name='rows')
    index = models.IntegerField(help_text="Position in the run's grid")
    lambda_value = models.FloatField()
    alpha = models.FloatField()
    k = models.IntegerField(null=True, blank=True)
    k_opt = models.IntegerField(null=True, blank=True)
    k_prime_opt = models.IntegerField(null=True, blank=True)
    theta0 = models.FloatField(null=True, blank=True)
    theta1 = models.FloatField(null=True, blank=True)
    theta2 = models.FloatField(null=True, blank=True)
    success_d2p = models.FloatField(null=True, blank=True)
    success_std = models.FloatField(null=True, blank=True)
    residual_norm = models.FloatField(null=True, blank=True)
    status = models.CharField(max_length=20)
    error = models.TextField(blank=True)

    class Meta:
        ordering = ['run', 'index']
        unique_together = ['run', 'index']

    def __str__(self):
        return f"{self.run_id}#{self.index} {self.status}"
