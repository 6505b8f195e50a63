from django.contrib import admin, messages

from .models import SweepRow, SweepRun
from .tasks import run_sweep_task


class SweepRowInline(admin.TabularInline):
    model = SweepRow
    extra = 0
    can_delete = False
    fields = ['index', 'lambda_value', 'alpha', 'k', 'theta1', 'theta2', 'success_d2p', 'success_std', 'status']
    readonly_fields = fields


@admin.register(SweepRun)
class SweepRunAdmin(admin.ModelAdmin):
    list_display = ['__str__', 'kind', 'status', 'get_point_count', 'created_at', 'finished_at']
    list_filter = ['kind', 'status', 'created_at']
    readonly_fields = ['status', 'error', 'created_at', 'finished_at']
    inlines = [SweepRowInline]
    actions = ['queue_runs']

    def get_point_count(self, obj):
        return len(obj.grid)
    get_point_count.short_description = 'Points'

    @admin.action(description='Queue selected sweeps')
    def queue_runs(self, request, queryset):
        for run in queryset:
            run_sweep_task.delay(run.pk)
        self.message_user(request, f"Queued {queryset.count()} sweep(s)", messages.SUCCESS)


@admin.register(SweepRow)
class SweepRowAdmin(admin.ModelAdmin):
    list_display = ['run', 'index', 'lambda_value', 'alpha', 'k', 'success_d2p', 'status']
    list_filter = ['status', 'run']
    raw_id_fields = ['run']
